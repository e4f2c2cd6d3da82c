#include "starfode/experiments.hpp"

#include "starfode/abm.hpp"
#include "starfode/errors.hpp"
#include "starfode/schrodinger.hpp"
#include "starfode/special.hpp"
#include "starfode/system_solver.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

struct SeriesData {
    VectorXd times;
    MatrixXcd values; // one column per time, one row per component
    MatrixXcd oracle;
    Eigen::MatrixXd coeff_abs; // m x n, empty for the abm solver
    std::vector<int> cutoffs;
    int rank = 0;
};

VectorXd uniform_grid(double T, int n_points, bool include_zero) {
    const int first = include_zero ? 0 : 1;
    VectorXd t(n_points - first + 1);
    for (int i = first; i <= n_points; ++i) t[i - first] = T * i / n_points;
    return t;
}

MatrixXcd sample_trajectory(const Trajectory& traj, const VectorXd& times) {
    const double dt = traj.times[1] - traj.times[0];
    MatrixXcd out(traj.values.rows(), times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(std::llround(times[i] / dt));
        out.col(i) = traj.values.col(std::min(idx, traj.values.cols() - 1));
    }
    return out;
}

int numerical_rank(const MatrixXcd& X) {
    Eigen::BDCSVD<MatrixXcd> svd(X);
    const VectorXd sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int r = 0;
    while (r < sv.size() && sv[r] > 1e-10 * sv[0]) ++r;
    return r;
}

void fill_from_solution(const SystemSolution& sol, SeriesData& out) {
    out.coeff_abs = sol.coeffs.cwiseAbs();
    out.cutoffs = sol.cutoff;
    out.rank = numerical_rank(sol.coeffs);
    out.values.resize(sol.coeffs.cols(), out.times.size());
    for (Eigen::Index i = 0; i < out.times.size(); ++i)
        out.values.col(i) = evaluate_system(sol, out.times[i]);
}

SeriesData run_scalar(const ProblemConfig& cfg) {
    const ScalarParams& sp = cfg.scalar;
    ScalarProblem p;
    p.alpha = cfg.alpha;
    p.T = cfg.T;
    p.y0 = sp.y0;

    std::function<double(double)> oracle;
    if (sp.manufactured) {
        const double a = cfg.alpha;
        p.f = [](double) { return 0.0; };
        p.g = [a](double t) {
            return t == 0.0 && a == 1.0 ? 1.0 / std::tgamma(2.0 - a)
                                        : std::pow(t, 1.0 - a) / std::tgamma(2.0 - a);
        };
        oracle = [](double t) { return t; };
    } else if (sp.field == "const") {
        const double F = sp.F;
        p.f = [F](double) { return F; };
        oracle = [&cfg, &sp](double t) {
            return oracle_autonomous(cfg.alpha, sp.F, sp.y0, t);
        };
    } else { // linear
        if (sp.F != 1.0)
            throw config_error("run_experiment: the linear field oracle needs F = 1");
        p.f = [](double t) { return t; };
        oracle = [&cfg, &sp](double t) {
            return oracle_linear_t(cfg.alpha, sp.y0, t);
        };
    }

    SeriesData out;
    out.times = uniform_grid(cfg.T, 200, false);
    if (cfg.solver == SolverKind::abm) {
        const FieldFn field = [&p](double t, const VectorXcd& u) {
            VectorXcd du = p.f(t) * u;
            if (p.g) du.array() += (*p.g)(t);
            return du;
        };
        VectorXcd u0(1);
        u0[0] = p.y0;
        out.values = sample_trajectory(
            abm_solve(cfg.alpha, field, u0, cfg.T, cfg.dt), out.times);
        out.cutoffs = {cfg.m};
    } else if (cfg.solver == SolverKind::dense) {
        const SpectralSolution sol = solve_scalar(p, cfg.m, cfg.cutoff);
        out.coeff_abs = sol.coeffs.cwiseAbs();
        out.cutoffs = {sol.cutoff};
        out.values.resize(1, out.times.size());
        for (Eigen::Index i = 0; i < out.times.size(); ++i)
            out.values(0, i) = evaluate_solution(sol, out.times[i]);
    } else {
        throw config_error("run_experiment: scalar kind supports dense or abm");
    }

    out.oracle.resize(1, out.times.size());
    for (Eigen::Index i = 0; i < out.times.size(); ++i)
        out.oracle(0, i) = oracle(out.times[i]);
    return out;
}

SystemProblem pathsum2_problem(const ProblemConfig& cfg) {
    SystemProblem p;
    p.alpha = cfg.alpha;
    p.T = cfg.T;
    p.K.setZero(2, 2);
    p.K << 1.0, 0.0, 1.0, 0.0;
    p.L.setZero(2, 2);
    p.L << 1.0, -1.0, 0.0, 0.0;
    p.f = [](double t) { return t; };
    p.u0.setZero(2);
    p.u0[0] = 1.0;
    return p;
}

SeriesData run_system(const ProblemConfig& cfg) {
    if (cfg.system.name != "pathsum2")
        throw config_error("run_experiment: unknown system problem");
    const SystemProblem p = pathsum2_problem(cfg);

    SeriesData out;
    out.times = uniform_grid(cfg.T, 100, true);
    if (cfg.solver == SolverKind::abm) {
        const FieldFn field = [&p](double t, const VectorXcd& u) {
            return VectorXcd((p.K + p.f(t) * p.L) * u);
        };
        out.values =
            sample_trajectory(abm_solve(cfg.alpha, field, p.u0, cfg.T, cfg.dt),
                              out.times);
        out.cutoffs = {cfg.m, cfg.m};
    } else if (cfg.solver == SolverKind::dense) {
        fill_from_solution(solve_system_dense(p, cfg.m, cfg.cutoff), out);
    } else {
        throw config_error("run_experiment: system kind supports dense or abm");
    }

    out.oracle.resize(2, out.times.size());
    for (Eigen::Index i = 0; i < out.times.size(); ++i) {
        const PathsumResult ps = pathsum_U(cfg.alpha, out.times[i]);
        out.oracle.col(i) = ps.U.cast<complex<double>>() * p.u0;
    }
    return out;
}

SeriesData run_schrodinger(const ProblemConfig& cfg) {
    const SchrodingerAssembly a = build_fd_schrodinger(
        cfg.schrodinger.grid_n, cfg.alpha, cfg.schrodinger.time_dependent);
    const SystemProblem p = schrodinger_problem(a, cfg.T);
    const FieldFn field = [&p](double t, const VectorXcd& u) {
        VectorXcd du = p.K * u;
        if (p.L.size() > 0 && p.f) du.noalias() += p.f(t) * (p.L * u);
        return du;
    };

    SeriesData out;
    out.times = uniform_grid(cfg.T, 20, true);

    if (cfg.solver == SolverKind::abm) {
        out.values = sample_trajectory(
            abm_solve(cfg.alpha, field, p.u0, cfg.T, cfg.dt), out.times);
        out.cutoffs.assign(static_cast<std::size_t>(p.u0.size()), cfg.m);
        // The independent reference for the abm run is the star-product path.
        ProblemConfig alt = cfg;
        alt.solver = cfg.schrodinger.time_dependent ? SolverKind::lowrank
                                                    : SolverKind::projected;
        SeriesData ref = run_schrodinger(alt);
        out.oracle = std::move(ref.values);
        return out;
    }

    switch (cfg.solver) {
    case SolverKind::dense:
        fill_from_solution(solve_system_dense(p, cfg.m, cfg.cutoff), out);
        break;
    case SolverKind::projected:
        fill_from_solution(
            solve_projected_autonomous(p, cfg.m, cfg.krylov_dim, cfg.cutoff),
            out);
        break;
    case SolverKind::lowrank: {
        const LowRankFactors fac = iterate_low_rank(p, cfg.m, cfg.tol);
        fill_from_solution(lowrank_solution(p, cfg.m, fac, cfg.cutoff), out);
        out.rank = fac.s;
        break;
    }
    default:
        throw config_error(
            "run_experiment: schrodinger kind supports dense, projected, "
            "lowrank or abm");
    }
    out.oracle = sample_trajectory(
        abm_solve(cfg.alpha, field, p.u0, cfg.T, cfg.dt), out.times);
    return out;
}

} // namespace

ExperimentResult run_experiment(const ProblemConfig& cfg,
                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();

    SeriesData data;
    switch (cfg.kind) {
    case ProblemKind::scalar: data = run_scalar(cfg); break;
    case ProblemKind::system: data = run_system(cfg); break;
    case ProblemKind::schrodinger: data = run_schrodinger(cfg); break;
    }

    ExperimentResult res;
    res.m = cfg.m;
    res.cutoff = 0;
    for (int k : data.cutoffs) res.cutoff = std::max(res.cutoff, k);
    res.rank = data.rank;
    for (Eigen::Index i = 0; i < data.times.size(); ++i) {
        for (Eigen::Index c = 0; c < data.values.rows(); ++c) {
            const double abs_err = std::abs(data.values(c, i) - data.oracle(c, i));
            const double den = std::abs(data.oracle(c, i));
            res.max_abs_err = std::max(res.max_abs_err, abs_err);
            if (den > 1e-14)
                res.max_rel_err = std::max(res.max_rel_err, abs_err / den);
        }
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();

    fs::create_directories(out_dir);
    res.solution_csv = (fs::path(out_dir) / "solution.csv").string();
    res.coeffs_csv = (fs::path(out_dir) / "coeffs.csv").string();
    res.summary_csv = (fs::path(out_dir) / "summary.csv").string();

    {
        std::ofstream f(res.solution_csv);
        f << "t,component,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err\n";
        for (Eigen::Index i = 0; i < data.times.size(); ++i) {
            for (Eigen::Index c = 0; c < data.values.rows(); ++c) {
                const complex<double> v = data.values(c, i);
                const complex<double> o = data.oracle(c, i);
                const double abs_err = std::abs(v - o);
                const double den = std::abs(o);
                f << format_g17(data.times[i]) << ',' << c << ','
                  << format_g17(v.real()) << ',' << format_g17(v.imag()) << ','
                  << format_g17(o.real()) << ',' << format_g17(o.imag()) << ','
                  << format_g17(abs_err) << ','
                  << format_g17(den > 1e-14 ? abs_err / den : 0.0) << '\n';
            }
        }
    }
    {
        std::ofstream f(res.coeffs_csv);
        f << "component,index,abs_coeff,retained\n";
        for (Eigen::Index c = 0; c < data.coeff_abs.cols(); ++c) {
            const int k = data.cutoffs[static_cast<std::size_t>(c)];
            for (Eigen::Index j = 0; j < data.coeff_abs.rows(); ++j)
                f << c << ',' << j << ',' << format_g17(data.coeff_abs(j, c))
                  << ',' << (j < k ? 1 : 0) << '\n';
        }
    }
    {
        std::ofstream f(res.summary_csv);
        f << "m,cutoff,max_abs_err,max_rel_err,rank,wall_ms\n";
        f << res.m << ',' << res.cutoff << ',' << format_g17(res.max_abs_err)
          << ',' << format_g17(res.max_rel_err) << ',' << res.rank << ','
          << format_g17(res.wall_ms) << '\n';
    }
    return res;
}

} // namespace starfode
