#pragma once

#include "starfode/legendre.hpp"
#include "starfode/scalar_solver.hpp"

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace starfode {

/// Linear system u^(alpha) = (K + L f(t)) u, u(0) = u0, on [0, T].
/// Scalars are complex; a real problem carries zero imaginary parts.
/// Autonomous means L = 0 or f absent.
struct SystemProblem {
    double alpha = 1.0;
    Eigen::MatrixXcd K;
    Eigen::MatrixXcd L;                // zero-sized or zero matrix if absent
    std::function<double(double)> f;   // scalar modulation, may be empty
    Eigen::VectorXcd u0;
    double T = 1.0;
};

/// Legendre coefficients of every component (column i holds component i)
/// with a per-component retained-coefficient cutoff.
struct SystemSolution {
    Basis basis;
    Eigen::MatrixXcd coeffs;
    std::vector<int> cutoff;
};

/// Iterate X ~ left * right^T; right has orthonormal columns when the factors
/// come from the Krylov inner solver.
struct LowRankFactors {
    Eigen::MatrixXcd left;  // m x s
    Eigen::MatrixXcd right; // n x s
    int s = 0;
    int iterations = 0;
    double residual_estimate = 0.0;
    double true_residual = 0.0;
};

/// Dense block solve of the full nm x nm resolvent system; guarded nm <= 40000.
SystemSolution solve_system_dense(const SystemProblem& p, int m,
                                  const CutoffPolicy& policy = {});

/// Solve X - Ha X M^T = b u0^T via Schur forms (autonomous case).
Eigen::MatrixXcd solve_stein_autonomous(const Eigen::MatrixXd& Ha,
                                        const Eigen::MatrixXcd& M,
                                        const Eigen::VectorXd& b,
                                        const Eigen::VectorXcd& u0);

/// Krylov-projected variant of the autonomous solve, j Arnoldi steps.
SystemSolution solve_projected_autonomous(const SystemProblem& p, int m, int j,
                                          const CutoffPolicy& policy = {});

/// Low-rank fixed-point iteration for the time-dependent case.
LowRankFactors iterate_low_rank(const SystemProblem& p, int m, double tol);

/// Exact solve when L = c * I: diagonalize K^T and decouple into m x m
/// systems. Serves as a dense-accuracy reference at sizes where the full
/// Kronecker system does not fit.
SystemSolution solve_system_decoupled(const SystemProblem& p, int m,
                                      const CutoffPolicy& policy = {});

/// Wrap a coefficient matrix (column i holds the Legendre coefficients of
/// component i) with per-component cutoffs.
SystemSolution make_system_solution(const Basis& basis, const Eigen::MatrixXcd& coeffs,
                                    const CutoffPolicy& policy = {});

SystemSolution lowrank_solution(const SystemProblem& p, int m,
                                const LowRankFactors& factors,
                                const CutoffPolicy& policy = {});

/// u_i(t) = sum_{j < cutoff_i} coeffs(j, i) P_j(t).
Eigen::VectorXcd evaluate_system(const SystemSolution& s, double t);

} // namespace starfode
