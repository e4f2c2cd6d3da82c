#pragma once

#include <Eigen/Dense>
#include <functional>

namespace starfode {

/// Orthonormal shifted Legendre basis on [0, T].
///
/// The basis is descriptor-only: polynomial values are always produced by the
/// three-term recurrence, never tabulated, which keeps evaluation stable for
/// large sizes.
struct Basis {
    double T = 1.0; // time horizon, interval is [0, T]
    int m = 1;      // number of polynomials, degrees 0 .. m-1
};

/// Gauss-Legendre rule mapped to [0, T]; exact for degree <= 2n-1.
struct Quadrature {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Coefficients of a function in the orthonormal shifted Legendre basis.
struct ExpansionCoeffs {
    Eigen::VectorXd beta;
    double residual = 0.0; // estimated tail magnitude at convergence
};

/// Integrals F(j,k,l) = int_0^T Pj Pk Pl, stored for sorted (j <= k <= l).
class TripleTensor {
public:
    TripleTensor() = default;
    TripleTensor(int m, Eigen::VectorXd packed) : m_(m), values_(std::move(packed)) {}

    int size() const { return m_; }
    double operator()(int j, int k, int l) const;

private:
    int m_ = 0;
    Eigen::VectorXd values_; // packed j <= k <= l
    friend TripleTensor triple_products(const Basis&);
};

Basis make_basis(double T, int m);

/// phi_m(t): the length-m vector (P0(t), ..., P_{m-1}(t)).
Eigen::VectorXd eval_basis(const Basis& basis, double t);

/// Values of all m basis polynomials at several points, one row per point.
Eigen::MatrixXd eval_basis_matrix(const Basis& basis, const Eigen::VectorXd& t);

/// Gauss-Legendre nodes and weights on [0, T] (Newton on the recurrence).
Quadrature gauss_legendre(int n, double T);

/// Project f onto the basis; node count doubles until coefficients agree to tol.
ExpansionCoeffs expand_function(const Basis& basis,
                                const std::function<double(double)>& f,
                                double tol = 1e-13);

TripleTensor triple_products(const Basis& basis);

} // namespace starfode
