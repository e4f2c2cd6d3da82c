#pragma once

#include <Eigen/Dense>
#include <functional>

namespace starfode {

/// Uniform-grid trajectory; column j of values is the state at times[j].
struct Trajectory {
    Eigen::VectorXd times;
    Eigen::MatrixXcd values;
};

using FieldFn = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

/// Adams-Bashforth-Moulton predictor-corrector for u^(alpha) = field(t, u)
/// in Volterra form: product-rectangle predictor, product-trapezoidal
/// corrector, full-history convolution. PECE by default; corrector_iters
/// adds further corrector sweeps.
Trajectory abm_solve(double alpha, const FieldFn& field, const Eigen::VectorXcd& u0,
                     double T, double dt, int corrector_iters = 1);

} // namespace starfode
