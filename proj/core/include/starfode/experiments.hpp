#pragma once

#include "starfode/config.hpp"

#include <string>

namespace starfode {

/// Aggregate outcome of one experiment run; the CSV artifacts live in the
/// output directory (solution.csv, coeffs.csv, summary.csv).
struct ExperimentResult {
    int m = 0;
    int cutoff = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    int rank = 0; // numerical rank of the solution matrix, 0 if scalar
    double wall_ms = 0.0;
    std::string solution_csv;
    std::string coeffs_csv;
    std::string summary_csv;
};

ExperimentResult run_experiment(const ProblemConfig& cfg,
                                const std::string& out_dir);

/// Shortest-round-trip decimal rendering with 17 significant digits.
std::string format_g17(double x);

} // namespace starfode
