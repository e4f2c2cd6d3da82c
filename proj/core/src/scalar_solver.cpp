#include "starfode/scalar_solver.hpp"

#include "starfode/errors.hpp"
#include "starfode/star.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace starfode {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr int kMedianWindow = 11;

double window_median(const VectorXd& a, int center, int half) {
    std::vector<double> w;
    w.reserve(2 * half + 1);
    for (int j = center - half; j <= center + half; ++j) w.push_back(a[j]);
    std::nth_element(w.begin(), w.begin() + half, w.end());
    return w[half];
}

} // namespace

int select_cutoff(const VectorXd& coeffs, const CutoffPolicy& policy) {
    const int m = static_cast<int>(coeffs.size());
    if (m == 0) throw std::invalid_argument("select_cutoff: empty coefficient vector");
    if (policy.kind == CutoffPolicy::Kind::fixed)
        return std::clamp(policy.k, 1, m);

    const int half = kMedianWindow / 2;
    const int fallback = std::max(1, static_cast<int>(std::ceil(0.7 * m)));
    if (m < 2 * kMedianWindow) return fallback;

    const VectorXd mag = coeffs.cwiseAbs();
    const int first = half;
    const int last = m - 1 - half;
    VectorXd med(m);
    double gmin = std::numeric_limits<double>::infinity();
    for (int c = first; c <= last; ++c) {
        med[c] = window_median(mag, c, half);
        gmin = std::min(gmin, med[c]);
    }

    // Plateau start: first center whose moving median has reached the
    // stagnation floor. Everything beyond it carries no information, whether
    // the tail stays flat or grows again towards the last elements.
    const double thr = 3.0 * std::max(gmin, 1e-300);
    int start = -1;
    for (int c = first; c <= last; ++c) {
        if (med[c] <= thr) {
            start = c;
            break;
        }
    }
    // A floor reached only inside the final window is just the tail of a
    // decaying profile; keep everything in that case.
    if (start < 0 || start > last - kMedianWindow) return m;
    return std::max(1, start);
}

SpectralSolution solve_scalar(const ScalarProblem& p, int m,
                              const CutoffPolicy& policy) {
    if (!(p.alpha > 0.0) || p.alpha > 1.0)
        throw std::invalid_argument("solve_scalar: alpha must lie in (0, 1]");
    if (!(p.T > 0.0)) throw std::invalid_argument("solve_scalar: T must be positive");
    if (m < 8) throw std::invalid_argument("solve_scalar: basis size must be >= 8");
    if (!p.f) throw std::invalid_argument("solve_scalar: coefficient function missing");

    const Basis basis = make_basis(p.T, m);
    const CoeffMatrix H = theta_matrix(basis);
    const MatrixXd Ha = frac_power(H, p.alpha);

    const ExpansionCoeffs fbeta = expand_function(basis, p.f);
    const TripleTensor triples = triple_products(basis);
    const CoeffMatrix Fdelta = mult_operator_matrix(basis, fbeta, triples);

    // The two-step form telescopes to a fixed point for the solution
    // coefficients themselves: c = y0 b0 + H^a F_delta c + H^a beta(g), where
    // b0 = H phi_m(0) evaluated analytically as the coefficient vector of the
    // constant 1. The literal product H phi_m(0) carries an O(m^{-1/2})
    // artifact in its last entry (truncated delta expansion) that otherwise
    // pollutes the whole solve.
    VectorXd rhs = VectorXd::Zero(m);
    rhs[0] = p.y0 * std::sqrt(p.T);
    if (p.g) {
        const ExpansionCoeffs gbeta = expand_function(basis, *p.g);
        rhs.noalias() += Ha * gbeta.beta;
    }

    const MatrixXd A = MatrixXd::Identity(m, m) - Ha * Fdelta.entries;
    Eigen::PartialPivLU<MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "solve_scalar: resolvent system numerically singular (rcond "
            << rcond << ")";
        throw solver_error(msg.str());
    }
    SpectralSolution s;
    s.basis = basis;
    s.coeffs = lu.solve(rhs);
    s.cutoff = select_cutoff(s.coeffs, policy);
    return s;
}

double evaluate_solution(const SpectralSolution& s, double t) {
    if (t < 0.0 || t > s.basis.T)
        throw std::domain_error("evaluate_solution: t outside [0, T]");
    const VectorXd phi = eval_basis(s.basis, t);
    return phi.head(s.cutoff).dot(s.coeffs.head(s.cutoff));
}

} // namespace starfode
