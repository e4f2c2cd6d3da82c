#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "starfode/errors.hpp"
#include "starfode/legendre.hpp"

#include <cmath>
#include <random>

using namespace starfode;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("constant basis polynomial is the normalized constant") {
    const Basis b = make_basis(2.0, 1);
    for (double t : {0.0, 0.5, 1.3, 2.0})
        CHECK(eval_basis(b, t)[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("degree-one polynomial at the left endpoint") {
    const Basis b = make_basis(2.0, 2);
    CHECK(eval_basis(b, 0.0)[1] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
}

TEST_CASE("basis vector values at interval endpoints and midpoint") {
    const Basis b = make_basis(2.0, 3);
    const VectorXd right = eval_basis(b, 2.0);
    CHECK(right[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(right[1] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    CHECK(right[2] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));

    const VectorXd left = eval_basis(b, 0.0);
    CHECK(left[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(left[1] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
    CHECK(left[2] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));

    CHECK(eval_basis(make_basis(2.0, 2), 1.0)[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("eval_basis rejects out-of-domain points") {
    const Basis b = make_basis(1.0, 4);
    CHECK_THROWS_AS(eval_basis(b, -0.1), std::domain_error);
    CHECK_THROWS_AS(eval_basis(b, 1.1), std::domain_error);
}

TEST_CASE("make_basis validates its arguments") {
    CHECK_THROWS_AS(make_basis(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(1.0, 0), std::invalid_argument);
}

TEST_CASE("quadrature is exact for polynomials up to degree 2n-1") {
    const int n = 8;
    const double T = 1.7;
    const Quadrature q = gauss_legendre(n, T);
    for (int d = 0; d < 2 * n; ++d) {
        double val = 0.0;
        for (int i = 0; i < n; ++i) val += q.weights[i] * std::pow(q.nodes[i], d);
        const double exact = std::pow(T, d + 1) / (d + 1);
        CHECK(std::abs(val - exact) <= 1e-13 * std::abs(exact));
    }
}

TEST_CASE("Gram matrix under own quadrature is the identity") {
    for (int m : {3, 20, 120, 500}) {
        const Basis b = make_basis(2.0, m);
        const Quadrature q = gauss_legendre(m + 1, b.T);
        const MatrixXd P = eval_basis_matrix(b, q.nodes); // nodes x m
        const MatrixXd G = P.transpose() * q.weights.asDiagonal() * P;
        const double dev = (G - MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        CHECK(dev <= 1e-12);
    }
}

TEST_CASE("unit-interval quadratic polynomial has unit norm") {
    const Basis b = make_basis(1.0, 3);
    const Quadrature q = gauss_legendre(8, 1.0);
    double acc = 0.0;
    for (int i = 0; i < q.nodes.size(); ++i) {
        const double v = eval_basis(b, q.nodes[i])[2];
        acc += q.weights[i] * v * v;
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("expansion of simple functions") {
    const Basis b = make_basis(2.0, 6);

    SUBCASE("constant") {
        const ExpansionCoeffs e = expand_function(b, [](double) { return 3.0; });
        CHECK(e.beta[0] == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-13));
        for (int j = 1; j < 6; ++j) CHECK(std::abs(e.beta[j]) <= 1e-13);
    }
    SUBCASE("a basis polynomial maps to a coordinate vector") {
        const ExpansionCoeffs e =
            expand_function(b, [&b](double t) { return eval_basis(b, t)[3]; });
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(e.beta[j] - (j == 3 ? 1.0 : 0.0)) <= 1e-12);
    }
    SUBCASE("linear function") {
        const ExpansionCoeffs e = expand_function(b, [](double t) { return t; });
        CHECK(e.beta[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
        CHECK(e.beta[1] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-13));
        for (int j = 2; j < 6; ++j) CHECK(std::abs(e.beta[j]) <= 1e-13);
    }
}

TEST_CASE("expansion round-trip on random polynomials") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const Basis b = make_basis(1.5, 12);
    VectorXd c(8);
    for (int i = 0; i < 8; ++i) c[i] = coef(rng);
    auto p = [&c](double t) {
        double v = 0.0;
        for (int i = 0; i < c.size(); ++i) v += c[i] * std::pow(t, i);
        return v;
    };
    const ExpansionCoeffs e = expand_function(b, p);
    std::uniform_real_distribution<double> pt(0.0, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        const double t = pt(rng);
        const double rec = eval_basis(b, t).dot(e.beta);
        CHECK(std::abs(rec - p(t)) <= 1e-12 * std::max(1.0, std::abs(p(t))));
    }
}

TEST_CASE("triple products match oversampled quadrature") {
    const Basis b = make_basis(2.0, 8);
    const TripleTensor F = triple_products(b);

    CHECK(F(0, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));

    const Quadrature q = gauss_legendre(200, b.T);
    const MatrixXd P = eval_basis_matrix(b, q.nodes);
    for (int j = 0; j < 8; ++j) {
        for (int k = 0; k < 8; ++k) {
            for (int l = 0; l < 8; ++l) {
                double ref = 0.0;
                for (int i = 0; i < q.nodes.size(); ++i)
                    ref += q.weights[i] * P(i, j) * P(i, k) * P(i, l);
                CHECK(std::abs(F(j, k, l) - ref) <= 1e-13);
            }
        }
    }
}

TEST_CASE("triple tensor symmetry and selection rules") {
    const int m = 20;
    const TripleTensor F = triple_products(make_basis(1.0, m));
    for (int j = 0; j < m; ++j) {
        for (int k = j; k < m; ++k) {
            for (int l = k; l < m; ++l) {
                const double v = F(j, k, l);
                CHECK(F(l, k, j) == v);
                CHECK(F(k, l, j) == v);
                CHECK(F(j, l, k) == v);
                if ((j + k + l) % 2 == 1 || l > j + k) CHECK(v == 0.0);
            }
        }
    }
}

TEST_CASE("expansion failure carries a residual") {
    const Basis b = make_basis(1.0, 10);
    // A discontinuous function never satisfies the coefficient agreement.
    // The jump sits away from dyadic points so no composite rule can align
    // a panel boundary with it.
    CHECK_THROWS_AS(
        expand_function(b, [](double t) { return t < 1.0 / 3.0 ? 0.0 : 1.0; },
                        1e-15),
        accuracy_error);
}
