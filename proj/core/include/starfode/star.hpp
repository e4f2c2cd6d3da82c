#pragma once

#include "starfode/legendre.hpp"

#include <Eigen/Dense>
#include <functional>

namespace starfode {

/// Legendre coefficient matrix of a bivariate distribution on [0,T]^2.
struct CoeffMatrix {
    Eigen::MatrixXd entries;
    Basis basis;
};

enum class FracPowerRoute { schur, series };

struct FracPowerConfig {
    double rho = 0.0; // shift for the series route; 0 means 4 * ||H||_F
    // Cap on the binomial series index. The linear convergence rate is
    // 1 - O(Re lambda_min / rho), so the default shift needs tens of
    // thousands of terms; each term is one small-matrix multiply.
    int series_max = 60000;
    FracPowerRoute route = FracPowerRoute::schur;
};

/// Coefficient matrix H_m of the Heaviside kernel; closed form from the
/// Legendre integration identity: antisymmetric tridiagonal plus T/2 at (0,0).
CoeffMatrix theta_matrix(const Basis& basis);

/// Principal-branch H^alpha. Schur route: complex Schur eigenvalue screening
/// plus inverse scaling-and-squaring on the triangular factor. Series route:
/// rho-shifted binomial series, terminated when the added term falls below
/// 1e-15 of the sum.
Eigen::MatrixXd frac_power(const CoeffMatrix& H, double alpha,
                           const FracPowerConfig& cfg = {});

/// Multiplication-operator matrix F_delta of f(t) delta(t-s):
/// (F_delta)_{kl} = sum_j beta_j F(j,k,l). Symmetric.
CoeffMatrix mult_operator_matrix(const Basis& basis, const ExpansionCoeffs& beta,
                                 const TripleTensor& triples);

/// Coefficient matrix of f(t) Theta^{*alpha}: F_delta * H^alpha.
CoeffMatrix star_coeff_matrix(const Basis& basis,
                              const std::function<double(double)>& f, double alpha);

} // namespace starfode
