#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "starfode/errors.hpp"
#include "starfode/scalar_solver.hpp"
#include "starfode/special.hpp"
#include "starfode/star.hpp"

#include <cmath>

using namespace starfode;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("zero field keeps the solution constant") {
    ScalarProblem p;
    p.alpha = 0.6;
    p.f = [](double) { return 0.0; };
    p.y0 = 3.0;
    p.T = 2.0;
    const SpectralSolution s = solve_scalar(p, 20);
    for (double t : {0.0, 0.3, 1.1, 2.0})
        CHECK(std::abs(evaluate_solution(s, t) - 3.0) <= 1e-12);
    const ExpansionCoeffs c =
        expand_function(make_basis(2.0, 20), [](double) { return 1.0; });
    CHECK((s.coeffs - 3.0 * c.beta).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("order one reduces to classical solutions") {
    SUBCASE("exponential decay") {
        ScalarProblem p;
        p.alpha = 1.0;
        p.f = [](double) { return -1.0; };
        p.y0 = 1.0;
        p.T = 2.0;
        const SpectralSolution s = solve_scalar(p, 60);
        for (int i = 0; i <= 40; ++i) {
            const double t = 2.0 * i / 40.0;
            CHECK(std::abs(evaluate_solution(s, t) - std::exp(-t)) <= 1e-10);
        }
    }
    SUBCASE("Gaussian growth for a linear-in-time field") {
        ScalarProblem p;
        p.alpha = 1.0;
        p.f = [](double t) { return t; };
        p.y0 = 1.0;
        p.T = 1.0;
        const SpectralSolution s = solve_scalar(p, 80);
        for (int i = 0; i <= 20; ++i) {
            const double t = i / 20.0;
            CHECK(std::abs(evaluate_solution(s, t) - std::exp(0.5 * t * t)) <= 1e-9);
        }
    }
}

TEST_CASE("fractional constant-field problem against the series oracle") {
    ScalarProblem p;
    p.alpha = 0.7;
    p.f = [](double) { return -1.0; };
    p.y0 = 1.0;
    p.T = 2.0;
    const SpectralSolution s = solve_scalar(p, 200, CutoffPolicy::fixed(140));
    CHECK(s.cutoff == 140);
    for (double t : {0.1, 0.5, 1.0, 1.5, 1.98}) {
        const double ref = oracle_autonomous(0.7, -1.0, 1.0, t);
        CHECK(std::abs(evaluate_solution(s, t) - ref) <= 1e-5 * std::abs(ref));
    }
    // Truncated expansions lose accuracy at t = 0.
    CHECK(std::abs(evaluate_solution(s, 0.0) - 1.0) <= 1e-3);
}

TEST_CASE("Neumann series consistency at small field norm") {
    const double alpha = 0.5;
    const Basis b = make_basis(1.0, 30);
    const CoeffMatrix H = theta_matrix(b);
    const MatrixXd Ha = frac_power(H, alpha);
    const ExpansionCoeffs fbeta =
        expand_function(b, [](double) { return -0.2; });
    const MatrixXd Fm =
        Ha * mult_operator_matrix(b, fbeta, triple_products(b)).entries;
    REQUIRE(Fm.norm() < 1.0);

    VectorXd rhs = VectorXd::Zero(30);
    rhs[0] = std::sqrt(1.0);
    VectorXd x = VectorXd::Zero(30);
    VectorXd term = rhs;
    for (int k = 0; k <= 50; ++k) {
        x += term;
        term = Fm * term;
    }

    ScalarProblem p;
    p.alpha = alpha;
    p.f = [](double) { return -0.2; };
    p.y0 = 1.0;
    p.T = 1.0;
    const SpectralSolution s = solve_scalar(p, 30);
    CHECK((s.coeffs - x).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("manufactured inhomogeneous solution y(t) = t") {
    const double alpha = 0.5;
    ScalarProblem p;
    p.alpha = alpha;
    p.f = [](double) { return 0.0; };
    p.g = [alpha](double t) {
        return std::pow(t, 1.0 - alpha) / std::tgamma(2.0 - alpha);
    };
    p.y0 = 0.0;
    p.T = 1.0;
    const SpectralSolution s = solve_scalar(p, 100);
    for (int i = 0; i <= 20; ++i) {
        const double t = i / 20.0;
        CHECK(std::abs(evaluate_solution(s, t) - t) <= 1e-8);
    }
}

TEST_CASE("cutoff selection") {
    SUBCASE("fixed policy clamps into range") {
        VectorXd v = VectorXd::Ones(100);
        CHECK(select_cutoff(v, CutoffPolicy::fixed(70)) == 70);
        CHECK(select_cutoff(v, CutoffPolicy::fixed(500)) == 100);
        CHECK(select_cutoff(v, CutoffPolicy::fixed(0)) == 1);
    }
    SUBCASE("monotone geometric decay keeps everything") {
        VectorXd v(100);
        for (int j = 0; j < 100; ++j) v[j] = std::pow(2.0, -j);
        CHECK(select_cutoff(v, CutoffPolicy::auto_policy()) == 100);
    }
    SUBCASE("synthetic plateau is located") {
        VectorXd v(200);
        for (int j = 0; j < 200; ++j)
            v[j] = j < 140 ? std::pow(10.0, -j / 20.0) : 1e-7;
        const int k = select_cutoff(v, CutoffPolicy::auto_policy());
        CHECK(k >= 130);
        CHECK(k <= 150);
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(select_cutoff(VectorXd(), CutoffPolicy::auto_policy()),
                        std::invalid_argument);
    }
}

TEST_CASE("cutoff stability on the nonautonomous problem") {
    ScalarProblem p;
    p.alpha = 0.5;
    p.f = [](double t) { return t; };
    p.y0 = 1.0;
    p.T = 2.0;
    SpectralSolution s = solve_scalar(p, 100, CutoffPolicy::fixed(70));
    double worst = 0.0, best = 1e300;
    for (int k = 60; k <= 80; k += 2) {
        s.cutoff = k;
        double maxrel = 0.0;
        for (int i = 1; i <= 40; ++i) {
            const double t = 0.1 + (1.98 - 0.1) * (i - 1) / 39.0;
            const double ref = oracle_linear_t(0.5, 1.0, t);
            maxrel = std::max(maxrel,
                              std::abs(evaluate_solution(s, t) - ref) / std::abs(ref));
        }
        worst = std::max(worst, maxrel);
        best = std::min(best, maxrel);
    }
    // Small absolute slack: the errors sit at the 5e-8 scale where the
    // factor-5 band is crossed by noise alone.
    CHECK(worst <= 5.0 * best + 1e-9);
}

TEST_CASE("argument validation") {
    ScalarProblem p;
    p.alpha = 0.5;
    p.f = [](double) { return 0.0; };
    p.T = 1.0;
    CHECK_THROWS_AS(solve_scalar(p, 4), std::invalid_argument);
    p.alpha = 1.5;
    CHECK_THROWS_AS(solve_scalar(p, 20), std::invalid_argument);
    p.alpha = 0.5;
    const SpectralSolution s = solve_scalar(p, 20);
    CHECK_THROWS_AS(evaluate_solution(s, -0.1), std::domain_error);
    CHECK_THROWS_AS(evaluate_solution(s, 1.2), std::domain_error);
}
