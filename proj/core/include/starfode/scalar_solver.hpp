#pragma once

#include "starfode/legendre.hpp"

#include <Eigen/Dense>
#include <functional>
#include <optional>

namespace starfode {

/// Scalar Caputo problem y^(alpha) = f(t) y + g(t), y(0) = y0, on [0, T].
struct ScalarProblem {
    double alpha = 1.0;
    std::function<double(double)> f;                // coefficient function
    std::optional<std::function<double(double)>> g; // forcing, optional
    double y0 = 1.0;
    double T = 1.0;
};

/// Cutoff selection: either a fixed retained count or the plateau heuristic.
struct CutoffPolicy {
    enum class Kind { automatic, fixed } kind = Kind::automatic;
    int k = 0;
    static CutoffPolicy auto_policy() { return {}; }
    static CutoffPolicy fixed(int k) { return {Kind::fixed, k}; }
};

/// Legendre coefficients of a solution component. Evaluation uses only the
/// first `cutoff` coefficients; the tail is kept for diagnostics.
struct SpectralSolution {
    Basis basis;
    Eigen::VectorXd coeffs;
    int cutoff = 1;
};

int select_cutoff(const Eigen::VectorXd& coeffs, const CutoffPolicy& policy);

SpectralSolution solve_scalar(const ScalarProblem& p, int m,
                              const CutoffPolicy& policy = {});

double evaluate_solution(const SpectralSolution& s, double t);

} // namespace starfode
