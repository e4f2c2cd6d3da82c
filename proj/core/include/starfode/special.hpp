#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace starfode {

/// Termwise stopping control shared by all series evaluations.
struct SeriesControl {
    double tol = 1e-15;
    int max_terms = 2000; // cap for single series
    int k_max = 120;      // per-index cap for double series
};

/// Series value plus the magnitude of the first omitted term.
struct SeriesResult {
    std::complex<double> value;
    double error_estimate = 0.0;
};

/// E_alpha(z) = sum_k z^k / Gamma(alpha k + 1), |z| <= 30.
SeriesResult ml_series(double alpha, std::complex<double> z,
                       const SeriesControl& ctl = {});
std::complex<double> mittag_leffler(double alpha, std::complex<double> z,
                                    const SeriesControl& ctl = {});

/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
SeriesResult gen_ml_series(double alpha, double beta, std::complex<double> z,
                           const SeriesControl& ctl = {});
std::complex<double> gen_mittag_leffler(double alpha, double beta,
                                        std::complex<double> z,
                                        const SeriesControl& ctl = {});

/// Generalized hypergeometric pFq with real parameters.
SeriesResult pfq_series(const std::vector<double>& a, const std::vector<double>& b,
                        std::complex<double> z, const SeriesControl& ctl = {});
std::complex<double> pfq(const std::vector<double>& a, const std::vector<double>& b,
                         std::complex<double> z, const SeriesControl& ctl = {});

/// Closed-form solution of the autonomous problem: y0 * E_alpha(F t^alpha).
double oracle_autonomous(double alpha, double F, double y0, double t,
                         const SeriesControl& ctl = {});

/// Solution of y^(alpha) = t y, y(0) = y0, as the general-alpha power series.
/// For alpha in {1/2, 1/3, 1} the hypergeometric closed form is also
/// evaluated and the two routes must agree to 1e-10.
double oracle_linear_t(double alpha, double y0, double t,
                       const SeriesControl& ctl = {});
double oracle_linear_t_series(double alpha, double y0, double t,
                              const SeriesControl& ctl = {});
/// Closed form for alpha in {1/2, 1/3, 1}; throws otherwise.
double oracle_linear_t_closed(double alpha, double y0, double t,
                              const SeriesControl& ctl = {});
bool oracle_linear_t_has_closed(double alpha);

/// Path-sum double series for the 2x2 system with M(t) = [[1+t, -t], [1, 0]].
struct PathsumResult {
    Eigen::Matrix2d U;
    double error_estimate = 0.0;
};
PathsumResult pathsum_U(double alpha, double t, const SeriesControl& ctl = {});

} // namespace starfode
