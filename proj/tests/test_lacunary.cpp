#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "gpnorm/errors.hpp"
#include "gpnorm/lacunary.hpp"

using namespace gpnorm;

namespace {

std::complex<double> dense_on_circle(const LacunaryPoly& lp, double x) {
    std::complex<double> s = 0;
    for (std::size_t k = 0; k < lp.dense.size(); ++k)
        s += static_cast<double>(lp.dense[k]) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) * x);
    return s * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(lp.shift) * x);
}

ExponentVector random_vector(std::mt19937_64& rng, std::size_t max_n, i64 bound) {
    std::uniform_int_distribution<std::size_t> nd(1, max_n);
    std::uniform_int_distribution<i64> ed(-bound, bound);
    std::vector<i64> v(nd(rng));
    for (auto& x : v) x = ed(rng);
    return ExponentVector(v);
}

}  // namespace

TEST_CASE("normalize shifts, merges and keeps the invariants") {
    const LacunaryPoly a = normalize({1, 3});
    CHECK(a.shift == 0);
    CHECK(a.dense == std::vector<i64>{1, 1, 0, 1});

    const LacunaryPoly b = normalize({-1, 2});
    CHECK(b.shift == 1);
    CHECK(b.dense == std::vector<i64>{1, 1, 0, 1});

    const LacunaryPoly c = normalize({1, 1});
    CHECK(c.dense == std::vector<i64>{1, 2});
    CHECK(c.leading() == 2);

    const LacunaryPoly z = normalize({0, 0});
    CHECK(z.dense == std::vector<i64>{3});
}

TEST_CASE("normalize invariants on random vectors") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        const ExponentVector a = random_vector(rng, 5, 40);
        const LacunaryPoly lp = normalize(a);
        i64 e = 0, sum = 0;
        for (i64 x : a.entries()) e = std::max(e, -x);
        for (i64 c : lp.dense) sum += c;
        CHECK(lp.shift == e);
        CHECK(lp.dense.front() != 0);
        CHECK(lp.leading() >= 1);
        CHECK(sum == static_cast<i64>(a.size()) + 1);
        if (!a.is_zero()) CHECK(static_cast<i64>(lp.degree()) <= 2 * a.sup_norm());
    }
}

TEST_CASE("evaluate_on_torus examples") {
    CHECK(std::abs(evaluate_on_torus({1}, 0.5)) < 1e-15);
    CHECK(std::abs(evaluate_on_torus({1, 2}, 1.0 / 3)) < 1e-15);
    // |1 + zeta_7 + zeta_7^3| from the closed form of each summand
    const double t = 2 * std::numbers::pi / 7;
    const double re = 1 + std::cos(t) + std::cos(3 * t), im = std::sin(t) + std::sin(3 * t);
    CHECK(std::abs(evaluate_on_torus({1, 3}, 1.0 / 7)) == doctest::Approx(std::hypot(re, im)).epsilon(1e-14));
    // the Gaussian period of order 3 for p = 7 solves x^2 + x + 2 = 0, so its modulus is sqrt 2
    CHECK(std::abs(evaluate_on_torus({1, 3}, 1.0 / 7)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("torus evaluation: triangle inequality and agreement with the dense form") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xd(0.0, 1.0);
    for (int it = 0; it < 300; ++it) {
        const ExponentVector a = random_vector(rng, 6, 60);
        const LacunaryPoly lp = normalize(a);
        const double x = xd(rng);
        const auto v = evaluate_on_torus(a, x);
        CHECK(std::abs(v) <= static_cast<double>(a.size()) + 1 + 1e-12);
        CHECK(std::abs(v - dense_on_circle(lp, x)) < 1e-11 * (1 + static_cast<double>(lp.degree())));
    }
}

TEST_CASE("evaluation at large exponents reduces the argument exactly") {
    const i64 big = i64{1} << 40;
    // e(big * 1/4) = 1 since big is divisible by 4
    CHECK(std::abs(evaluate_on_torus({big}, 0.25) - std::complex<double>(2, 0)) < 1e-12);
    CHECK(frac_product(big + 1, 0.25) == doctest::Approx(0.25));
    CHECK(std::abs(unit_root(7 * 1000003 + 3, 7) - std::polar(1.0, 2 * std::numbers::pi * 3 / 7)) < 1e-15);
}

TEST_CASE("compose examples and identity") {
    CHECK(compose(ExponentMatrix::identity(2), std::vector<i64>{3, 5}) == ExponentVector{3, 5});
    CHECK(compose(ExponentMatrix::from_rows({{1, 0}, {1, 1}}), std::vector<i64>{1, 1}) == ExponentVector{2, 1});
    CHECK(compose(ExponentMatrix::from_rows({{1, 3}}), std::vector<i64>{2}) == ExponentVector{2, 6});
    CHECK_THROWS_AS(compose(ExponentMatrix::identity(2), std::vector<i64>{1}), DimensionMismatch);

    std::mt19937_64 rng(2);
    for (int it = 0; it < 50; ++it) {
        const ExponentVector a = random_vector(rng, 6, 1000);
        CHECK(compose(ExponentMatrix::from_rows({std::vector<i64>(a.entries().begin(), a.entries().end())}),
                      std::vector<i64>{1}) == a);
        const std::size_t n = a.size();
        CHECK(compose(ExponentMatrix::identity(n), a.entries()) == a);
    }
}

TEST_CASE("compose overflow is an error") {
    const i64 big = i64{1} << 62;
    CHECK_THROWS_AS(compose(ExponentMatrix::from_rows({{big}, {big}}), std::vector<i64>{1, 1}), OverflowError);
    CHECK_THROWS_AS(compose(ExponentMatrix::from_rows({{big}}), std::vector<i64>{4}), OverflowError);
}

TEST_CASE("compose agrees with substitution into P_A") {
    const ExponentMatrix a = ExponentMatrix::from_rows({{1, 0, 2}, {0, 1, -1}});
    const std::vector<i64> nu{3, 7};
    const MultiPoly lhs = MultiPoly::from_matrix(a).substitute(nu);
    const ExponentVector ap = compose(a, nu);
    const MultiPoly rhs = MultiPoly::from_matrix(ExponentMatrix::from_rows(
        {std::vector<i64>(ap.entries().begin(), ap.entries().end())}));
    CHECK(lhs == rhs);
}

TEST_CASE("parse_poly") {
    const MultiPoly t = parse_poly("1+x1+x2");
    CHECK(t.nvars() == 2);
    CHECK(t.term_count() == 3);

    const MultiPoly s = parse_poly("1+x1^2+x2");
    const ExponentMatrix m = s.exponent_matrix();
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    // columns are the monomials x1^2 and x2
    bool saw_x1sq = false, saw_x2 = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.col(j) == std::vector<i64>{2, 0}) saw_x1sq = true;
        if (m.col(j) == std::vector<i64>{0, 1}) saw_x2 = true;
    }
    CHECK(saw_x1sq);
    CHECK(saw_x2);

    const MultiPoly merged = parse_poly("1+x1+x1");
    CHECK(merged == parse_poly("1+2*x1"));
    CHECK(merged.terms().at({1}) == 2);

    CHECK(parse_poly(" 3 * x1 ^ -2 - x2*x1 ") == parse_poly("-x1*x2+3*x1^-2"));
    CHECK(parse_poly("x1 - x1").is_zero());
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse_poly(""), ParseError);
    CHECK_THROWS_AS(parse_poly("1+"), ParseError);
    CHECK_THROWS_AS(parse_poly("1.5*x1"), ParseError);
    CHECK_THROWS_AS(parse_poly("1+y1"), ParseError);
    CHECK_THROWS_AS(parse_poly("1+x0"), ParseError);
    try {
        parse_poly("1+x1*?");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("poly_to_string round trip") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<i64> cd(-9, 9), ed(-4, 4);
    std::uniform_int_distribution<int> nv(1, 4), nt(1, 6);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = static_cast<std::size_t>(nv(rng));
        MultiPoly p(n);
        const int terms = nt(rng);
        for (int k = 0; k < terms; ++k) {
            std::vector<i64> e(n);
            for (auto& x : e) x = ed(rng);
            p.add_term(e, cd(rng));
        }
        if (p.is_zero()) continue;
        const MultiPoly q = parse_poly(poly_to_string(p));
        // parsing infers the variable count from the highest index used
        CHECK(poly_to_string(q) == poly_to_string(p));
        if (q.nvars() == p.nvars()) CHECK(q.terms() == p.terms());
    }
}
