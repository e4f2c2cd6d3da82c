#include "starfode/star.hpp"

#include "starfode/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

CoeffMatrix theta_matrix(const Basis& basis) {
    const int m = basis.m;
    const double T = basis.T;
    MatrixXd H = MatrixXd::Zero(m, m);
    H(0, 0) = 0.5 * T;
    for (int k = 1; k < m; ++k) {
        // int_0^t P_{k-1} couples only to degrees k and k-2 (plus the P_0 row,
        // which the same formula covers): sub/superdiagonal of opposite sign.
        const double c = 0.5 * T / std::sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0));
        H(k, k - 1) = c;
        H(k - 1, k) = -c;
    }
    return CoeffMatrix{std::move(H), basis};
}

namespace {

MatrixXd frac_power_schur(const MatrixXd& H, double alpha) {
    const MatrixXcd Hc = H.cast<complex<double>>();
    Eigen::ComplexSchur<MatrixXcd> schur(Hc, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
        throw solver_error("frac_power: complex Schur decomposition failed");
    for (Eigen::Index i = 0; i < schur.matrixT().rows(); ++i) {
        const complex<double> lam = schur.matrixT()(i, i);
        if (lam.real() < 0.0 && std::abs(lam.imag()) <= 1e-12)
            throw branch_error("frac_power: eigenvalue on the negative real axis");
    }

    // Principal power by inverse scaling and squaring on the Schur factor;
    // stable where a naive triangular recurrence loses digits on the
    // clustered spectrum of these matrices.
    const MatrixXcd Fa = Hc.pow(alpha);
    const double imag_norm = Fa.imag().norm();
    if (imag_norm > 1e-11 * Fa.norm())
        throw accuracy_error("frac_power: imaginary residue too large", imag_norm);
    return Fa.real();
}

MatrixXd frac_power_series(const MatrixXd& H, double alpha, double rho,
                           int series_max) {
    const Eigen::Index m = H.rows();
    const MatrixXd A = H / rho - MatrixXd::Identity(m, m);

    // Convergence needs the spectrum of H/rho - I inside the unit disc.
    Eigen::EigenSolver<MatrixXd> eig(A, /*computeEigenvectors=*/false);
    if (eig.eigenvalues().cwiseAbs().maxCoeff() >= 1.0 - 1e-14)
        throw accuracy_error("frac_power: series shift rho too small for convergence",
                             eig.eigenvalues().cwiseAbs().maxCoeff());

    MatrixXd term = MatrixXd::Identity(m, m); // binom(alpha,0) A^0
    MatrixXd sum = term;
    double coeff = 1.0;
    double last_ratio = 1.0;
    for (int k = 1; k <= series_max; ++k) {
        coeff *= (alpha - k + 1) / k;
        term = term * A;
        sum.noalias() += coeff * term;
        last_ratio = std::abs(coeff) * term.norm() / sum.norm();
        if (last_ratio < 1e-15) break;
    }
    if (last_ratio >= 1e-10)
        throw accuracy_error("frac_power: binomial series not converged", last_ratio);
    return std::pow(rho, alpha) * sum;
}

} // namespace

MatrixXd frac_power(const CoeffMatrix& H, double alpha, const FracPowerConfig& cfg) {
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::invalid_argument("frac_power: alpha must lie in (0, 2]");
    if (cfg.route == FracPowerRoute::schur) return frac_power_schur(H.entries, alpha);
    const double rho = cfg.rho > 0.0 ? cfg.rho : 4.0 * H.entries.norm();
    return frac_power_series(H.entries, alpha, rho, cfg.series_max);
}

CoeffMatrix mult_operator_matrix(const Basis& basis, const ExpansionCoeffs& beta,
                                 const TripleTensor& triples) {
    const int m = basis.m;
    if (beta.beta.size() != m || triples.size() != m)
        throw std::invalid_argument("mult_operator_matrix: basis size mismatch");

    // Skip negligible expansion coefficients; the tensor is sparse under the
    // parity and triangle selection rules.
    const double cut = 1e-300;
    MatrixXd F = MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        const double bj = beta.beta[j];
        if (std::abs(bj) < cut) continue;
        for (int k = 0; k < m; ++k) {
            const int lmin = std::abs(j - k);
            const int lmax = std::min(m - 1, j + k);
            for (int l = lmin + ((j + k + lmin) % 2); l <= lmax; l += 2)
                F(k, l) += bj * triples(j, k, l);
        }
    }
    return CoeffMatrix{std::move(F), basis};
}

CoeffMatrix star_coeff_matrix(const Basis& basis,
                              const std::function<double(double)>& f, double alpha) {
    const ExpansionCoeffs beta = expand_function(basis, f);
    const TripleTensor triples = triple_products(basis);
    const CoeffMatrix fdelta = mult_operator_matrix(basis, beta, triples);
    const MatrixXd Ha = frac_power(theta_matrix(basis), alpha);
    return CoeffMatrix{fdelta.entries * Ha, basis};
}

} // namespace starfode
