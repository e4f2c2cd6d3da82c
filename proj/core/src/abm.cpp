#include "starfode/abm.hpp"

#include <cmath>
#include <stdexcept>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

Trajectory abm_solve(double alpha, const FieldFn& field, const VectorXcd& u0,
                     double T, double dt, int corrector_iters) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("abm_solve: alpha must lie in (0, 1]");
    if (!(dt > 0.0) || !(T > 0.0))
        throw std::invalid_argument("abm_solve: dt and T must be positive");
    if (T / dt > 1e7)
        throw std::length_error("abm_solve: step count exceeds 1e7 guard");
    if (corrector_iters < 1)
        throw std::invalid_argument("abm_solve: corrector_iters >= 1");
    if (!field) throw std::invalid_argument("abm_solve: field missing");

    const int steps = static_cast<int>(std::llround(T / dt));
    const Eigen::Index n = u0.size();

    // Predictor weights b_k = (k+1)^a - k^a and corrector interior weights
    // c_k = (k+1)^{a+1} + (k-1)^{a+1} - 2 k^{a+1}.
    VectorXd b(steps + 1), c(steps + 2);
    for (int k = 0; k <= steps; ++k)
        b[k] = std::pow(k + 1.0, alpha) - std::pow(double(k), alpha);
    c[0] = 0.0;
    for (int k = 1; k <= steps + 1; ++k)
        c[k] = std::pow(k + 1.0, alpha + 1.0) + std::pow(k - 1.0, alpha + 1.0) -
               2.0 * std::pow(double(k), alpha + 1.0);

    const double s1 = std::pow(dt, alpha) / std::tgamma(alpha + 1.0);
    const double s2 = std::pow(dt, alpha) / std::tgamma(alpha + 2.0);

    Trajectory traj;
    traj.times = VectorXd::LinSpaced(steps + 1, 0.0, steps * dt);
    traj.values.resize(n, steps + 1);
    traj.values.col(0) = u0;

    MatrixXcd F(n, steps + 1); // field history f(t_j, u_j)
    F.col(0) = field(0.0, u0);

    for (int step = 0; step < steps; ++step) {
        const double t_next = traj.times[step + 1];

        VectorXcd pred_sum =
            F.leftCols(step + 1) * b.head(step + 1).reverse();
        const VectorXcd u_pred = u0 + s1 * pred_sum;

        // History part of the corrector: weight of f(t_0, u_0) plus interior
        // trapezoidal weights on f(t_1..t_step, .).
        const double a0 = std::pow(double(step), alpha + 1.0) -
                          (step - alpha) * std::pow(step + 1.0, alpha);
        VectorXcd hist = a0 * F.col(0);
        if (step >= 1)
            hist.noalias() += F.middleCols(1, step) * c.segment(1, step).reverse();

        VectorXcd u_next = u_pred;
        for (int it = 0; it < corrector_iters; ++it)
            u_next = u0 + s2 * (field(t_next, u_next) + hist);

        traj.values.col(step + 1) = u_next;
        F.col(step + 1) = field(t_next, u_next);
    }
    return traj;
}

} // namespace starfode
