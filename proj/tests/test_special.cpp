#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "starfode/errors.hpp"
#include "starfode/special.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace starfode;
using std::complex;

TEST_CASE("Mittag-Leffler special values") {
    CHECK(mittag_leffler(0.7, 0.0).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mittag_leffler(1.0, 1.0).real() ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(mittag_leffler(2.0, -1.0).real() ==
          doctest::Approx(std::cos(1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(mittag_leffler(0.5, {40.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(-0.5, 1.0), std::invalid_argument);
}

TEST_CASE("two-parameter Mittag-Leffler") {
    CHECK(gen_mittag_leffler(1.0, 2.0, 1.0).real() ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    for (double beta : {0.5, 1.0, 2.5})
        CHECK(gen_mittag_leffler(0.6, beta, 0.0).real() ==
              doctest::Approx(1.0 / std::tgamma(beta)).epsilon(1e-14));

    // beta = 1 must reproduce E_alpha; the two series use independent term
    // parameterizations.
    // Arguments kept small enough that the alternating terms never grow
    // large; otherwise cancellation dominates both series alike.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ad(0.4, 1.8);
    std::uniform_real_distribution<double> zd(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double a = ad(rng);
        const complex<double> z{zd(rng), zd(rng)};
        CHECK(std::abs(gen_mittag_leffler(a, 1.0, z) - mittag_leffler(a, z)) <=
              1e-12 * (1.0 + std::abs(mittag_leffler(a, z))));
    }
}

TEST_CASE("generalized hypergeometric series") {
    CHECK(pfq({}, {}, 1.0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(pfq({1.7}, {1.7}, 0.9).real() ==
          doctest::Approx(std::exp(0.9)).epsilon(1e-13));
    CHECK(pfq({1.0, 1.0}, {2.0}, 0.5).real() ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(pfq({1.0}, {-2.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(pfq({1.0, 1.0, 1.0}, {2.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(pfq({1.0, 1.0}, {2.0}, 1.5), std::domain_error);
}

TEST_CASE("series error estimates are first-omitted-term bounds") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ad(0.3, 1.5);
    std::uniform_real_distribution<double> zd(-3.0, 3.0);
    SeriesControl loose;
    loose.tol = 1e-9;
    SeriesControl tight;
    tight.tol = 1e-10;
    for (int i = 0; i < 50; ++i) {
        const double a = ad(rng);
        const complex<double> z{zd(rng), zd(rng)};
        const SeriesResult r1 = gen_ml_series(a, 1.3, z, loose);
        const SeriesResult r2 = gen_ml_series(a, 1.3, z, tight);
        CHECK(std::abs(r1.value - r2.value) <= 10.0 * r1.error_estimate + 1e-15);
    }
}

TEST_CASE("constant-coefficient solution oracle") {
    CHECK(oracle_autonomous(0.6, -1.0, 2.5, 0.0) == 2.5);
    CHECK(oracle_autonomous(1.0, -1.0, 1.0, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    // Tightening the tolerance by 100x must not move the value.
    SeriesControl tight;
    tight.tol = 1e-17;
    tight.max_terms = 4000;
    CHECK(std::abs(oracle_autonomous(0.7, -1.0, 1.0, 2.0) -
                   oracle_autonomous(0.7, -1.0, 1.0, 2.0, tight)) <= 1e-13);
}

TEST_CASE("linear-coefficient solution oracle") {
    CHECK(oracle_linear_t(0.5, 3.0, 0.0) == 3.0);
    CHECK(oracle_linear_t(1.0, 1.0, 1.0) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));

    SUBCASE("general series equals the hypergeometric closed forms") {
        for (double a : {0.5, 1.0 / 3.0, 1.0}) {
            for (int i = 0; i < 20; ++i) {
                const double t = 1.5 * (i + 1) / 20.0;
                const double s = oracle_linear_t_series(a, 1.0, t);
                const double c = oracle_linear_t_closed(a, 1.0, t);
                CHECK(std::abs(s - c) <= 1e-10 * std::max(1.0, std::abs(c)));
            }
        }
    }
    SUBCASE("no closed form for other orders") {
        CHECK_FALSE(oracle_linear_t_has_closed(0.7));
        CHECK_THROWS_AS(oracle_linear_t_closed(0.7, 1.0, 1.0), std::invalid_argument);
    }
}

namespace {

// Classical RK4 integration of U' = M(t) U, U(0) = I, M(t) = [[1+t, -t], [1, 0]].
Eigen::Matrix2d rk4_U(double t_end, int steps) {
    auto M = [](double t) {
        Eigen::Matrix2d m;
        m << 1.0 + t, -t, 1.0, 0.0;
        return m;
    };
    Eigen::Matrix2d U = Eigen::Matrix2d::Identity();
    const double h = t_end / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const Eigen::Matrix2d k1 = M(t) * U;
        const Eigen::Matrix2d k2 = M(t + 0.5 * h) * (U + 0.5 * h * k1);
        const Eigen::Matrix2d k3 = M(t + 0.5 * h) * (U + 0.5 * h * k2);
        const Eigen::Matrix2d k4 = M(t + h) * (U + h * k3);
        U += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return U;
}

} // namespace

TEST_CASE("path-sum propagator for the 2x2 model") {
    SUBCASE("identity at t = 0") {
        const PathsumResult r = pathsum_U(0.5, 0.0);
        CHECK((r.U - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("order one matches a classical ODE integration") {
        const PathsumResult r = pathsum_U(1.0, 0.5);
        const Eigen::Matrix2d ref = rk4_U(0.5, 4000);
        CHECK((r.U - ref).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("leading small-time behavior of the lower-right entry") {
        // First summand (k=1, m=0) of the double series: 1 - U22 ~
        // t^{2a+1} / Gamma(2a + 2).
        const double a = 0.4;
        const double t = 1e-6;
        const double lead = std::pow(t, 2.0 * a + 1.0) / std::tgamma(2.0 * a + 2.0);
        const double got = 1.0 - pathsum_U(a, t).U(1, 1);
        // Next term of the series is smaller by a factor of order t^a.
        CHECK(std::abs(got - lead) <= 1e-2 * std::abs(lead));
    }
    SUBCASE("column sums against the first column identity at order one") {
        // At alpha = 1 the system is a classical ODE; check a second time.
        const PathsumResult r = pathsum_U(1.0, 1.0);
        const Eigen::Matrix2d ref = rk4_U(1.0, 8000);
        CHECK((r.U - ref).cwiseAbs().maxCoeff() <= 1e-8);
    }
}
