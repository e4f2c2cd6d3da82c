#pragma once

#include "starfode/system_solver.hpp"

#include <Eigen/Dense>

namespace starfode {

/// Finite-difference discretization of the fractional Schrodinger problem on
/// the square [-2,2]^2 with a well potential (0 inside the open unit square,
/// 10 outside) and a Gaussian initial state. The order enters through the
/// phase factor i^{-alpha} absorbed into K and L.
struct SchrodingerAssembly {
    Eigen::MatrixXcd K;
    Eigen::MatrixXcd L;              // zero-sized in the time-independent case
    std::function<double(double)> f; // sin(5 pi^2 t) modulation, empty if TI
    Eigen::VectorXcd u0;
    int grid_n = 0;                  // interior points per axis
    double h = 0.0;                  // mesh width
    double alpha = 1.0;
};

SchrodingerAssembly build_fd_schrodinger(int grid_n, double alpha,
                                         bool time_dependent);

SystemProblem schrodinger_problem(const SchrodingerAssembly& a, double T);

} // namespace starfode
