#include "starfode/system_solver.hpp"

#include "starfode/errors.hpp"
#include "starfode/star.hpp"
#include "starfode/stein.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

struct Discretization {
    Basis basis;
    MatrixXd Ha; // H^alpha
    // Exact value of H phi_m(0): the coefficient vector of the constant 1.
    // The literal product carries an O(m^{-1/2}) artifact in its last entry
    // (truncated delta expansion) that would pollute every solve.
    VectorXd b0;
    MatrixXd Fm; // H^alpha F_delta(f), zero-sized when autonomous
};

bool has_modulation(const SystemProblem& p) {
    return p.L.size() > 0 && p.L.norm() > 0.0 && static_cast<bool>(p.f);
}

void validate(const SystemProblem& p, int m) {
    if (!(p.alpha > 0.0) || p.alpha > 1.0)
        throw std::invalid_argument("system solve: alpha must lie in (0, 1]");
    if (!(p.T > 0.0)) throw std::invalid_argument("system solve: T must be positive");
    if (m < 8) throw std::invalid_argument("system solve: basis size must be >= 8");
    const Eigen::Index n = p.K.rows();
    if (n == 0 || p.K.cols() != n)
        throw std::invalid_argument("system solve: K must be square and nonempty");
    if (p.L.size() > 0 && (p.L.rows() != n || p.L.cols() != n))
        throw std::invalid_argument("system solve: L dimensions must match K");
    if (p.u0.size() != n)
        throw std::invalid_argument("system solve: u0 length must match K");
}

Discretization discretize(const SystemProblem& p, int m) {
    Discretization d;
    d.basis = make_basis(p.T, m);
    const CoeffMatrix H = theta_matrix(d.basis);
    d.Ha = frac_power(H, p.alpha);
    d.b0 = VectorXd::Zero(m);
    d.b0[0] = std::sqrt(p.T);
    if (has_modulation(p)) {
        const ExpansionCoeffs beta = expand_function(d.basis, p.f);
        const TripleTensor triples = triple_products(d.basis);
        d.Fm = d.Ha * mult_operator_matrix(d.basis, beta, triples).entries;
    }
    return d;
}

} // namespace

SystemSolution make_system_solution(const Basis& basis, const MatrixXcd& coeffs,
                                    const CutoffPolicy& policy) {
    SystemSolution s;
    s.basis = basis;
    s.coeffs = coeffs;
    s.cutoff.resize(static_cast<std::size_t>(coeffs.cols()));
    for (Eigen::Index i = 0; i < coeffs.cols(); ++i)
        s.cutoff[static_cast<std::size_t>(i)] =
            select_cutoff(s.coeffs.col(i).cwiseAbs(), policy);
    return s;
}

VectorXcd evaluate_system(const SystemSolution& s, double t) {
    if (t < 0.0 || t > s.basis.T)
        throw std::domain_error("evaluate_system: t outside [0, T]");
    const VectorXd phi = eval_basis(s.basis, t);
    const Eigen::Index n = s.coeffs.cols();
    VectorXcd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int k = s.cutoff[static_cast<std::size_t>(i)];
        u[i] = s.coeffs.col(i).head(k).transpose() * phi.head(k);
    }
    return u;
}

SystemSolution solve_system_dense(const SystemProblem& p, int m,
                                  const CutoffPolicy& policy) {
    validate(p, m);
    const Eigen::Index n = p.K.rows();
    const Eigen::Index nm = n * m;
    if (nm > 40000)
        throw std::invalid_argument(
            "solve_system_dense: nm > 40000, use a projected or low-rank solver");

    const Discretization d = discretize(p, m);
    const MatrixXcd Hac = d.Ha.cast<complex<double>>();
    const MatrixXcd Fmc =
        d.Fm.size() > 0 ? MatrixXcd(d.Fm.cast<complex<double>>()) : MatrixXcd();

    MatrixXcd A = MatrixXcd::Identity(nm, nm);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            MatrixXcd block = p.K(i, j) * Hac;
            if (Fmc.size() > 0 && p.L(i, j) != complex<double>(0.0))
                block.noalias() += p.L(i, j) * Fmc;
            A.block(i * m, j * m, m, m) -= block;
        }
    }

    VectorXcd rhs(nm);
    for (Eigen::Index i = 0; i < n; ++i)
        rhs.segment(i * m, m) = p.u0[i] * d.b0.cast<complex<double>>();

    Eigen::PartialPivLU<MatrixXcd> lu(std::move(A));
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "solve_system_dense: resolvent system numerically singular (rcond "
            << lu.rcond() << ")";
        throw solver_error(msg.str());
    }
    const VectorXcd x = lu.solve(rhs);

    MatrixXcd X(m, n);
    for (Eigen::Index i = 0; i < n; ++i) X.col(i) = x.segment(i * m, m);
    return make_system_solution(d.basis, X, policy);
}

MatrixXcd solve_stein_autonomous(const MatrixXd& Ha, const MatrixXcd& M,
                                 const VectorXd& b, const VectorXcd& u0) {
    const MatrixXcd C = b.cast<complex<double>>() * u0.transpose();
    return solve_stein(Ha.cast<complex<double>>(), M, C);
}

SystemSolution solve_projected_autonomous(const SystemProblem& p, int m, int j,
                                          const CutoffPolicy& policy) {
    validate(p, m);
    if (has_modulation(p))
        throw std::invalid_argument(
            "solve_projected_autonomous: problem must be autonomous");
    if (j < 1) throw std::invalid_argument("solve_projected_autonomous: j >= 1");

    const Discretization d = discretize(p, m);
    // The conjugate-transposed equation Z - conj(K) Z (H^a)^T = conj(u0) b0^T
    // with Z = X^H localizes the column space of Z in the Krylov space of
    // conj(K) from conj(u0); X is recovered as (V W)^H.
    const KrylovReduction red =
        arnoldi_reduce(p.K.conjugate(), p.u0.conjugate(), j);
    const MatrixXcd C = (red.V.adjoint() * p.u0.conjugate()) *
                        d.b0.transpose().cast<complex<double>>();
    const MatrixXcd W =
        solve_stein(red.J, d.Ha.cast<complex<double>>(), C);
    const MatrixXcd X = (red.V * W).adjoint();
    return make_system_solution(d.basis, X, policy);
}

namespace {

// Truncate the product B C^T through thin QR of both factors and an SVD of
// the small core, relative threshold rtol on the singular values.
void compress_pair(MatrixXcd& B, MatrixXcd& C, double rtol) {
    const Eigen::Index s = B.cols();
    if (s == 0 || C.cols() != s) return;
    const Eigen::Index rb = std::min<Eigen::Index>(B.rows(), s);
    const Eigen::Index rc = std::min<Eigen::Index>(C.rows(), s);

    Eigen::HouseholderQR<MatrixXcd> qb(B);
    Eigen::HouseholderQR<MatrixXcd> qc(C);
    const MatrixXcd QB =
        qb.householderQ() * MatrixXcd::Identity(B.rows(), rb);
    const MatrixXcd QC =
        qc.householderQ() * MatrixXcd::Identity(C.rows(), rc);
    const MatrixXcd RB =
        qb.matrixQR().topRows(rb).triangularView<Eigen::Upper>();
    const MatrixXcd RC =
        qc.matrixQR().topRows(rc).triangularView<Eigen::Upper>();

    Eigen::JacobiSVD<MatrixXcd> svd(RB * RC.transpose(),
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd sv = svd.singularValues();
    Eigen::Index t = 1;
    if (sv.size() == 0 || sv[0] == 0.0) {
        B = MatrixXcd::Zero(B.rows(), 1);
        C = MatrixXcd::Zero(C.rows(), 1);
        return;
    }
    while (t < sv.size() && sv[t] > rtol * sv[0]) ++t;
    B = QB * svd.matrixU().leftCols(t) * sv.head(t).asDiagonal();
    C = QC * svd.matrixV().leftCols(t).conjugate();
}

} // namespace

LowRankFactors iterate_low_rank(const SystemProblem& p, int m, double tol) {
    validate(p, m);
    if (!(tol > 0.0)) throw std::invalid_argument("iterate_low_rank: tol > 0");
    const Eigen::Index n = p.K.rows();

    const Discretization d = discretize(p, m);
    const MatrixXcd Fmc =
        d.Fm.size() > 0 ? MatrixXcd(d.Fm.cast<complex<double>>()) : MatrixXcd();
    const VectorXcd b0_c = d.b0.cast<complex<double>>();
    const VectorXd b0_abs = d.b0.cwiseAbs();
    // Fixed Schur form of the right-hand coefficient (H^a)^T of every inner
    // Stein solve.
    const SchurForm schur_HaT =
        schur_form(MatrixXcd(d.Ha.transpose().cast<complex<double>>()));

    constexpr double compress_rtol = 1e-10;
    constexpr int max_iters = 500;
    constexpr int stagnation_window = 20;

    MatrixXcd Lk = MatrixXcd::Zero(m, 1);
    MatrixXcd Rk = MatrixXcd::Zero(n, 1);
    complex<double> scalar_prev =
        (b0_abs.transpose().cast<complex<double>>() * Lk) *
        (Rk.transpose() * p.u0);
    double best_diff = std::numeric_limits<double>::infinity();
    int since_best = 0;
    int q = 1;
    double last_diff = std::numeric_limits<double>::infinity();
    double last_true_res = std::numeric_limits<double>::infinity();

    for (int k = 0; k < max_iters; ++k) {
        MatrixXcd B(m, Lk.cols() + 1);
        MatrixXcd C(n, Rk.cols() + 1);
        if (Fmc.size() > 0)
            B.leftCols(Lk.cols()) = Fmc * Lk;
        else
            B.leftCols(Lk.cols()).setZero();
        B.col(Lk.cols()) = b0_c;
        C.leftCols(Rk.cols()) =
            (p.L.size() > 0 ? MatrixXcd(p.L * Rk) : MatrixXcd::Zero(n, Rk.cols()));
        C.col(Rk.cols()) = p.u0;
        compress_pair(B, C, compress_rtol);

        // Inner solve of X' - K X' (H^a)^T = C B^T for X' = X^T, projected
        // onto the block Krylov space of K from C; q grows until the inner
        // residual clears tol/10.
        const double rhs_norm = std::max(B.norm() * C.norm(), 1e-300);
        MatrixXcd W;
        KrylovReduction red;
        for (;;) {
            red = arnoldi_reduce(p.K, C, q);
            W = solve_stein(schur_form(red.J), schur_HaT,
                            (red.V.adjoint() * C) * B.transpose());
            const MatrixXcd Xt = red.V * W;
            const double inner_res =
                (C * B.transpose() - Xt + p.K * Xt * d.Ha.transpose()).norm() /
                rhs_norm;
            if (inner_res < tol / 10.0 || red.V.cols() >= n) break;
            ++q;
        }

        MatrixXcd Lnext = W.transpose();
        MatrixXcd Rnext = red.V;
        compress_pair(Lnext, Rnext, compress_rtol);

        const complex<double> scalar_now =
            (b0_abs.transpose().cast<complex<double>>() * Lnext) *
            (Rnext.transpose() * p.u0);
        last_diff = std::abs(scalar_now - scalar_prev);
        scalar_prev = scalar_now;
        Lk = std::move(Lnext);
        Rk = std::move(Rnext);

        const bool check_now = last_diff < tol || (k + 1) % 10 == 0;
        if (check_now) {
            const MatrixXcd X = Lk * Rk.transpose();
            MatrixXcd res = b0_c * p.u0.transpose() - X +
                            d.Ha * X * p.K.transpose();
            if (Fmc.size() > 0) res.noalias() += Fmc * X * p.L.transpose();
            last_true_res = res.norm() /
                            std::max(b0_c.norm() * p.u0.norm(), 1e-300);
        }
        if (last_diff < tol && last_true_res < 10.0 * tol) {
            LowRankFactors out;
            out.left = std::move(Lk);
            out.right = std::move(Rk);
            out.s = static_cast<int>(out.left.cols());
            out.iterations = k + 1;
            out.residual_estimate = last_diff;
            out.true_residual = last_true_res;
            return out;
        }

        if (last_diff < best_diff * (1.0 - 1e-12)) {
            best_diff = last_diff;
            since_best = 0;
        } else if (++since_best >= stagnation_window) {
            std::ostringstream msg;
            msg << "iterate_low_rank: stagnation after " << (k + 1)
                << " iterations (estimate " << last_diff << ", best " << best_diff
                << ", true residual " << last_true_res << ")";
            throw convergence_error(msg.str());
        }
    }
    std::ostringstream msg;
    msg << "iterate_low_rank: no convergence in " << max_iters
        << " iterations (estimate " << last_diff << ", true residual "
        << last_true_res << ")";
    throw convergence_error(msg.str());
}

SystemSolution lowrank_solution(const SystemProblem& p, int m,
                                const LowRankFactors& factors,
                                const CutoffPolicy& policy) {
    validate(p, m);
    const Basis basis = make_basis(p.T, m);
    return make_system_solution(basis,
                                factors.left * factors.right.transpose(), policy);
}

SystemSolution solve_system_decoupled(const SystemProblem& p, int m,
                                      const CutoffPolicy& policy) {
    validate(p, m);
    const Eigen::Index n = p.K.rows();
    complex<double> c{0.0, 0.0};
    if (p.L.size() > 0) {
        c = p.L(0, 0);
        const double dev =
            (p.L - c * MatrixXcd::Identity(n, n)).norm();
        if (dev > 1e-12 * (1.0 + std::abs(c)) * std::sqrt(double(n)))
            throw std::invalid_argument(
                "solve_system_decoupled: L must be a multiple of the identity");
    }
    const bool modulated = std::abs(c) > 0.0 && static_cast<bool>(p.f);

    const Discretization d = discretize(p, m);
    Eigen::ComplexEigenSolver<MatrixXcd> eig(p.K.transpose());
    if (eig.info() != Eigen::Success)
        throw solver_error("solve_system_decoupled: eigendecomposition failed");
    const MatrixXcd& Wv = eig.eigenvectors();
    const VectorXcd& ev = eig.eigenvalues();

    const MatrixXcd Hac = d.Ha.cast<complex<double>>();
    const MatrixXcd base =
        modulated ? MatrixXcd(MatrixXcd::Identity(m, m) -
                              c * d.Fm.cast<complex<double>>())
                  : MatrixXcd(MatrixXcd::Identity(m, m));
    const Eigen::RowVectorXcd w = p.u0.transpose() * Wv;

    MatrixXcd Xt(m, n);
    for (Eigen::Index jcol = 0; jcol < n; ++jcol) {
        const MatrixXcd A = base - ev[jcol] * Hac;
        Eigen::PartialPivLU<MatrixXcd> lu(A);
        if (!(lu.rcond() > 1e-14))
            throw solver_error(
                "solve_system_decoupled: decoupled system numerically singular");
        Xt.col(jcol) = lu.solve(
            VectorXcd(w[jcol] * d.b0.cast<complex<double>>()));
    }
    const MatrixXcd X = Wv.transpose().fullPivLu().solve(Xt.transpose()).transpose();
    return make_system_solution(d.basis, X, policy);
}

} // namespace starfode
