#include "starfode/config.hpp"
#include "starfode/errors.hpp"
#include "starfode/experiments.hpp"
#include "starfode/special.hpp"

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace starfode;

ProblemConfig bench_preset(const std::string& name) {
    ProblemConfig cfg;
    if (name == "fig1") {
        cfg.kind = ProblemKind::scalar;
        cfg.alpha = 0.7;
        cfg.T = 2.0;
        cfg.m = 200;
        cfg.cutoff = CutoffPolicy::fixed(140);
        cfg.scalar = {"const", -1.0, 1.0, false};
    } else if (name == "fig2a" || name == "fig2b") {
        cfg.kind = ProblemKind::scalar;
        cfg.alpha = name == "fig2a" ? 0.5 : 1.0 / 3.0;
        cfg.T = 2.0;
        cfg.m = 100;
        cfg.cutoff = CutoffPolicy::fixed(70);
        cfg.scalar = {"linear", 1.0, 1.0, false};
    } else if (name == "pathsum") {
        cfg.kind = ProblemKind::system;
        cfg.alpha = 0.5;
        cfg.T = 1.0;
        cfg.m = 100;
    } else if (name == "schrodinger-ti") {
        cfg.kind = ProblemKind::schrodinger;
        cfg.alpha = 0.5;
        cfg.T = 1.0;
        cfg.m = 500;
        cfg.solver = SolverKind::projected;
        cfg.schrodinger = {15, false};
    } else if (name == "schrodinger-td") {
        cfg.kind = ProblemKind::schrodinger;
        cfg.alpha = 0.3;
        cfg.T = 1.0;
        cfg.m = 100;
        cfg.solver = SolverKind::lowrank;
        cfg.schrodinger = {15, true};
    } else {
        throw config_error("unknown bench case '" + name + "'");
    }
    return cfg;
}

void print_result(const ExperimentResult& r) {
    std::cout << "m=" << r.m << " cutoff=" << r.cutoff
              << " max_abs_err=" << format_g17(r.max_abs_err)
              << " max_rel_err=" << format_g17(r.max_rel_err)
              << " rank=" << r.rank << " wall_ms=" << format_g17(r.wall_ms)
              << "\n"
              << "wrote " << r.solution_csv << ", " << r.coeffs_csv << ", "
              << r.summary_csv << "\n";
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Star-product solver for linear fractional differential "
                 "equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    auto* solve = app.add_subcommand("solve", "Run an experiment from a config file");
    solve->add_option("config", config_path, "JSON config file")->required();
    solve->add_option("--out", out_dir, "Output directory");

    std::string bench_case;
    int bench_m = 0;
    std::string bench_cutoff;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run a named benchmark case");
    bench
        ->add_option("case", bench_case,
                     "fig1|fig2a|fig2b|pathsum|schrodinger-ti|schrodinger-td")
        ->required();
    bench->add_option("--m", bench_m, "Override basis size");
    bench->add_option("--cutoff", bench_cutoff, "auto or a fixed count");
    bench->add_option("--out", bench_out, "Output directory");

    std::string oracle_kind;
    std::vector<std::string> oracle_args;
    auto* oracle = app.add_subcommand("oracle", "Evaluate a reference formula");
    oracle->add_option("what", oracle_kind, "ml|pfq|pathsum")->required();
    oracle->add_option("args", oracle_args, "Arguments of the chosen formula");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            print_result(run_experiment(load_config(config_path), out_dir));
        } else if (bench->parsed()) {
            ProblemConfig cfg = bench_preset(bench_case);
            if (bench_m > 0) cfg.m = bench_m;
            if (!bench_cutoff.empty()) {
                if (bench_cutoff == "auto")
                    cfg.cutoff = CutoffPolicy::auto_policy();
                else
                    cfg.cutoff = CutoffPolicy::fixed(std::stoi(bench_cutoff));
            }
            const std::string dir =
                bench_out.empty() ? "out/" + bench_case : bench_out;
            print_result(run_experiment(cfg, dir));
        } else if (oracle->parsed()) {
            if (oracle_kind == "ml") {
                if (oracle_args.size() < 2)
                    throw config_error("oracle ml needs: alpha z_re [z_im]");
                const double a = std::stod(oracle_args[0]);
                const std::complex<double> z(
                    std::stod(oracle_args[1]),
                    oracle_args.size() > 2 ? std::stod(oracle_args[2]) : 0.0);
                const auto r = ml_series(a, z);
                std::cout << format_g17(r.value.real()) << " "
                          << format_g17(r.value.imag()) << "\n";
            } else if (oracle_kind == "pfq") {
                if (oracle_args.size() < 3)
                    throw config_error("oracle pfq needs: a1,a2,... b1,b2,... z");
                const auto r = pfq_series(parse_list(oracle_args[0]),
                                          parse_list(oracle_args[1]),
                                          std::stod(oracle_args[2]));
                std::cout << format_g17(r.value.real()) << " "
                          << format_g17(r.value.imag()) << "\n";
            } else if (oracle_kind == "pathsum") {
                if (oracle_args.size() < 2)
                    throw config_error("oracle pathsum needs: alpha t");
                const auto r = pathsum_U(std::stod(oracle_args[0]),
                                         std::stod(oracle_args[1]));
                std::printf("%s %s\n%s %s\n", format_g17(r.U(0, 0)).c_str(),
                            format_g17(r.U(0, 1)).c_str(),
                            format_g17(r.U(1, 0)).c_str(),
                            format_g17(r.U(1, 1)).c_str());
            } else {
                throw config_error("unknown oracle '" + oracle_kind + "'");
            }
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy guard: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
