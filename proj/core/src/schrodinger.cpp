#include "starfode/schrodinger.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

SchrodingerAssembly build_fd_schrodinger(int grid_n, double alpha,
                                         bool time_dependent) {
    if (grid_n < 5)
        throw std::invalid_argument("build_fd_schrodinger: grid_n must be >= 5");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("build_fd_schrodinger: alpha must lie in (0, 1]");

    const int n = grid_n * grid_n;
    const double h = 4.0 / (grid_n + 1);
    const complex<double> phase =
        std::exp(complex<double>(0.0, -0.5 * M_PI * alpha)); // i^{-alpha}

    auto coord = [&](int k) { return -2.0 + (k + 1) * h; };
    auto idx = [&](int ix, int iy) { return iy * grid_n + ix; };

    // H0 = -1/2 Delta_h + V, with Dirichlet boundary rows eliminated.
    Eigen::MatrixXd H0 = Eigen::MatrixXd::Zero(n, n);
    VectorXcd u0(n);
    const double inv_h2 = 1.0 / (h * h);
    for (int iy = 0; iy < grid_n; ++iy) {
        for (int ix = 0; ix < grid_n; ++ix) {
            const double x = coord(ix);
            const double y = coord(iy);
            const int r = idx(ix, iy);
            const double V1 =
                (std::abs(x) < 1.0 && std::abs(y) < 1.0) ? 0.0 : 10.0;
            H0(r, r) = 2.0 * inv_h2 + V1;
            if (ix > 0) H0(r, idx(ix - 1, iy)) = -0.5 * inv_h2;
            if (ix + 1 < grid_n) H0(r, idx(ix + 1, iy)) = -0.5 * inv_h2;
            if (iy > 0) H0(r, idx(ix, iy - 1)) = -0.5 * inv_h2;
            if (iy + 1 < grid_n) H0(r, idx(ix, iy + 1)) = -0.5 * inv_h2;
            u0[r] = std::exp(-0.5 * (x * x + y * y));
        }
    }

    SchrodingerAssembly a;
    a.grid_n = grid_n;
    a.h = h;
    a.alpha = alpha;
    a.u0 = std::move(u0);
    if (time_dependent) {
        // V2(x, t) = V1(x) + (1 + 0.1 sin(5 pi^2 t)) / 2: the constant half
        // joins K, the modulated part becomes L sin(5 pi^2 t).
        a.K = phase *
              (H0 + 0.5 * Eigen::MatrixXd::Identity(n, n)).cast<complex<double>>();
        a.L = (0.05 * phase) * MatrixXcd::Identity(n, n);
        a.f = [](double t) { return std::sin(5.0 * M_PI * M_PI * t); };
    } else {
        a.K = phase * H0.cast<complex<double>>();
    }
    return a;
}

SystemProblem schrodinger_problem(const SchrodingerAssembly& a, double T) {
    SystemProblem p;
    p.alpha = a.alpha;
    p.K = a.K;
    p.L = a.L;
    p.f = a.f;
    p.u0 = a.u0;
    p.T = T;
    return p;
}

} // namespace starfode
