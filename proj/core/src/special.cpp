#include "starfode/special.hpp"

#include "starfode/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace starfode {

using std::complex;

namespace {

// Compensated accumulator for complex series.
struct KahanSum {
    complex<double> sum{0.0, 0.0};
    complex<double> comp{0.0, 0.0};
    void add(complex<double> term) {
        const complex<double> y = term - comp;
        const complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::abs(x - std::round(x)) < 1e-12;
}

// Sign of Gamma(x) away from the poles.
double gamma_sign(double x) {
    if (x > 0.0) return 1.0;
    const long long f = static_cast<long long>(std::floor(x));
    return (f % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

SeriesResult ml_series(double alpha, complex<double> z, const SeriesControl& ctl) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("mittag_leffler: alpha must be positive");
    if (std::abs(z) > 30.0)
        throw std::domain_error("mittag_leffler: |z| > 30 outside supported domain");

    // Multiplicative term update term_{k+1} = term_k z Gamma(ak+1)/Gamma(ak+a+1);
    // deliberately parameterized differently from the generalized series.
    KahanSum acc;
    complex<double> term{1.0, 0.0};
    for (int k = 0; k < ctl.max_terms; ++k) {
        acc.add(term);
        term *= z * std::exp(std::lgamma(alpha * k + 1.0) -
                             std::lgamma(alpha * k + alpha + 1.0));
        if (k > 0 && std::abs(term) < ctl.tol * std::abs(acc.sum))
            return SeriesResult{acc.sum, std::abs(term)};
    }
    throw accuracy_error("mittag_leffler: series not converged", std::abs(term));
}

complex<double> mittag_leffler(double alpha, complex<double> z,
                               const SeriesControl& ctl) {
    return ml_series(alpha, z, ctl).value;
}

SeriesResult gen_ml_series(double alpha, double beta, complex<double> z,
                           const SeriesControl& ctl) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("gen_mittag_leffler: alpha must be positive");
    if (std::abs(z) > 30.0)
        throw std::domain_error("gen_mittag_leffler: |z| > 30 outside supported domain");

    KahanSum acc;
    complex<double> zk{1.0, 0.0};
    for (int k = 0; k < ctl.max_terms; ++k) {
        const double g = alpha * k + beta;
        // Gamma has poles at non-positive integers; those terms vanish.
        if (is_nonpositive_integer(g)) {
            zk *= z;
            continue;
        }
        acc.add(zk * gamma_sign(g) * std::exp(-std::lgamma(g)));
        zk *= z;
        const double next_mag = std::abs(zk) * std::exp(-std::lgamma(alpha * (k + 1) + beta));
        if (k > 0 && next_mag < ctl.tol * std::abs(acc.sum))
            return SeriesResult{acc.sum, next_mag};
    }
    throw accuracy_error("gen_mittag_leffler: series not converged", std::abs(zk));
}

complex<double> gen_mittag_leffler(double alpha, double beta, complex<double> z,
                                   const SeriesControl& ctl) {
    return gen_ml_series(alpha, beta, z, ctl).value;
}

SeriesResult pfq_series(const std::vector<double>& a, const std::vector<double>& b,
                        complex<double> z, const SeriesControl& ctl) {
    for (double bj : b)
        if (is_nonpositive_integer(bj))
            throw std::invalid_argument("pfq: lower parameter at a pole");
    if (a.size() > b.size() + 1)
        throw std::domain_error("pfq: divergent for p > q + 1");
    if (a.size() == b.size() + 1 && std::abs(z) >= 1.0)
        throw std::domain_error("pfq: |z| < 1 required when p = q + 1");

    KahanSum acc;
    complex<double> term{1.0, 0.0};
    for (int k = 0; k < ctl.max_terms; ++k) {
        acc.add(term);
        double ratio = 1.0;
        for (double ai : a) ratio *= ai + k;
        for (double bj : b) ratio /= bj + k;
        term *= ratio * z / (k + 1.0);
        if (k > 0 && std::abs(term) < ctl.tol * std::abs(acc.sum))
            return SeriesResult{acc.sum, std::abs(term)};
    }
    throw accuracy_error("pfq: series not converged", std::abs(term));
}

complex<double> pfq(const std::vector<double>& a, const std::vector<double>& b,
                    complex<double> z, const SeriesControl& ctl) {
    return pfq_series(a, b, z, ctl).value;
}

double oracle_autonomous(double alpha, double F, double y0, double t,
                         const SeriesControl& ctl) {
    if (t < 0.0) throw std::domain_error("oracle_autonomous: t must be >= 0");
    if (t == 0.0) return y0;
    return y0 * mittag_leffler(alpha, F * std::pow(t, alpha), ctl).real();
}

double oracle_linear_t_series(double alpha, double y0, double t,
                              const SeriesControl& ctl) {
    if (t < 0.0) throw std::domain_error("oracle_linear_t: t must be >= 0");
    if (t == 0.0) return y0;

    const double c = 1.0 / (alpha + 1.0);
    const double log_ap1 = std::log(alpha + 1.0);
    const double log_t = std::log(t);
    KahanSum acc;
    acc.add(complex<double>{1.0, 0.0});
    const double lg_norm = std::lgamma(1.0 + c);
    double last = 0.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        const double lt = k * log_ap1 + std::lgamma(k + c + 1.0) -
                          std::lgamma(alpha * k + k + alpha + 2.0) +
                          (alpha + 1.0) * (k + 1.0) * log_t - lg_norm;
        last = std::exp(lt);
        acc.add(complex<double>{last, 0.0});
        if (k > 2 && last < ctl.tol * std::abs(acc.sum))
            return y0 * acc.sum.real();
    }
    throw accuracy_error("oracle_linear_t: series not converged", last);
}

bool oracle_linear_t_has_closed(double alpha) {
    return std::abs(alpha - 0.5) < 1e-12 || std::abs(alpha - 1.0 / 3.0) < 1e-12 ||
           std::abs(alpha - 1.0) < 1e-12;
}

double oracle_linear_t_closed(double alpha, double y0, double t,
                              const SeriesControl& ctl) {
    if (std::abs(alpha - 1.0) < 1e-12) return y0 * std::exp(0.5 * t * t);
    if (std::abs(alpha - 0.5) < 1e-12) {
        const double z = t * t * t / 3.0;
        const double p1 = pfq({1.0, 4.0 / 3.0}, {7.0 / 6.0, 3.0 / 2.0}, z, ctl).real();
        const double p2 = pfq({5.0 / 6.0}, {2.0 / 3.0}, z, ctl).real();
        return y0 * (4.0 * std::pow(t, 1.5) / (3.0 * std::sqrt(M_PI)) * p1 + p2);
    }
    if (std::abs(alpha - 1.0 / 3.0) < 1e-12) {
        const double z = std::pow(t, 4.0) / 4.0;
        const double p1 =
            pfq({7.0 / 12.0, 11.0 / 12.0}, {0.5, 0.75}, z, ctl).real();
        const double p2 = pfq({1.0, 5.0 / 4.0, 19.0 / 12.0},
                              {7.0 / 6.0, 17.0 / 12.0, 5.0 / 3.0}, z, ctl).real();
        const double p3 = pfq({11.0 / 12.0, 1.0, 5.0 / 4.0},
                              {5.0 / 6.0, 13.0 / 12.0, 4.0 / 3.0}, z, ctl).real();
        const double c2 =
            63.0 * std::sqrt(3.0) * std::pow(t, 8.0 / 3.0) * std::tgamma(1.0 / 3.0) /
            (160.0 * M_PI);
        const double c3 = 9.0 * std::sqrt(3.0) * std::pow(t, 4.0 / 3.0) *
                          std::tgamma(2.0 / 3.0) / (8.0 * M_PI);
        return y0 * (p1 + c2 * p2 + c3 * p3);
    }
    throw std::invalid_argument("oracle_linear_t_closed: no closed form for this alpha");
}

double oracle_linear_t(double alpha, double y0, double t, const SeriesControl& ctl) {
    const double series = oracle_linear_t_series(alpha, y0, t, ctl);
    if (oracle_linear_t_has_closed(alpha)) {
        const double closed = oracle_linear_t_closed(alpha, y0, t, ctl);
        const double scale = std::max({1.0, std::abs(series), std::abs(closed)});
        if (std::abs(series - closed) > 1e-10 * scale)
            throw accuracy_error("oracle_linear_t: series/closed-form mismatch",
                                 std::abs(series - closed));
    }
    return series;
}

namespace {

// Double sum  sum_{k>=k0} sum_{m>=0} (a+1)^k G(k + 1/(a+1)) / G(k + (k+m+ms) a + 1)
// * t^{a (k+m+ms) + k} / G(1/(a+1)), with Gamma ratios in log space.
double pathsum_double_sum(double alpha, double t, int k0, int m_shift,
                          const SeriesControl& ctl, double& worst_omitted) {
    // At t = 0 only the (k, m) = (0, 0) term of the U11 sum survives.
    if (t == 0.0) return (k0 == 0 && m_shift == 0) ? 1.0 : 0.0;
    const double c = 1.0 / (alpha + 1.0);
    const double lg_norm = std::lgamma(c);
    const double log_ap1 = std::log(alpha + 1.0);
    const double log_t = t > 0.0 ? std::log(t) : 0.0;

    KahanSum acc;
    double outer_first = 0.0;
    for (int k = k0; k < k0 + ctl.k_max; ++k) {
        double inner_last = 0.0;
        bool inner_done = false;
        for (int m = 0; m < ctl.k_max; ++m) {
            const double expo = alpha * (k + m + m_shift) + k;
            const double lt = k * log_ap1 + std::lgamma(k + c) -
                              std::lgamma(k + (k + m + m_shift) * alpha + 1.0) +
                              expo * log_t - lg_norm;
            inner_last = std::exp(lt);
            if (m == 0) outer_first = inner_last;
            acc.add(complex<double>{inner_last, 0.0});
            if (m > 2 && inner_last < ctl.tol * std::max(1.0, std::abs(acc.sum))) {
                inner_done = true;
                break;
            }
        }
        if (!inner_done)
            throw accuracy_error("pathsum_U: inner sum not converged", inner_last);
        if (k > k0 + 2 && outer_first < ctl.tol * std::max(1.0, std::abs(acc.sum))) {
            worst_omitted = std::max(worst_omitted, outer_first);
            return acc.sum.real();
        }
    }
    throw accuracy_error("pathsum_U: outer sum not converged", outer_first);
}

} // namespace

PathsumResult pathsum_U(double alpha, double t, const SeriesControl& ctl) {
    if (t < 0.0) throw std::domain_error("pathsum_U: t must be >= 0");
    double est = 0.0;
    PathsumResult r;
    r.U(0, 0) = pathsum_double_sum(alpha, t, 0, 0, ctl, est);
    r.U(1, 0) = pathsum_double_sum(alpha, t, 0, 1, ctl, est);
    r.U(0, 1) = -pathsum_double_sum(alpha, t, 1, 0, ctl, est);
    r.U(1, 1) = 1.0 - pathsum_double_sum(alpha, t, 1, 1, ctl, est);
    r.error_estimate = est;
    return r;
}

} // namespace starfode
