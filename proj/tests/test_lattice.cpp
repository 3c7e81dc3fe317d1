#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "gpnorm/arith.hpp"
#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/lattice.hpp"
#include "oracles.hpp"

using namespace gpnorm;

namespace {

using Rows = std::vector<std::vector<i64>>;

std::vector<i64> vec(const ExponentVector& a) { return {a.entries().begin(), a.entries().end()}; }

i64 sup(const std::vector<i64>& v) { return oracle::sup_norm(v); }

}  // namespace

TEST_CASE("Hermite form is canonical") {
    const Subgroup a = Subgroup::from_generators(2, {{2, 4}, {1, 1}});
    const Subgroup b = Subgroup::from_generators(2, {{1, 1}, {0, 2}, {3, 5}});
    CHECK(a == b);
    for (std::size_t i = 0; i < a.rank(); ++i) {
        std::size_t piv = 0;
        while (a.rows()[i][piv] == 0) ++piv;
        CHECK(a.rows()[i][piv] > 0);
        for (std::size_t r = 0; r < i; ++r) {
            CHECK(a.rows()[r][piv] >= 0);
            CHECK(a.rows()[r][piv] < a.rows()[i][piv]);
        }
    }
    CHECK(Subgroup::from_generators(3, {{0, 0, 0}}).rank() == 0);
    CHECK(Subgroup::full(3).rank() == 3);
    CHECK_THROWS_AS(Subgroup::zero(2).basis(), InputError);
}

TEST_CASE("coordinates and membership") {
    const Subgroup s = Subgroup::from_generators(3, {{1, 2, 3}, {0, 3, 6}});
    const std::vector<i64> v{2, 7, 12};  // 2*(1,2,3) + (0,3,6)
    const auto nu = s.coordinates(v);
    REQUIRE(nu.has_value());
    std::vector<i64> back(3, 0);
    for (std::size_t i = 0; i < s.rank(); ++i)
        for (std::size_t j = 0; j < 3; ++j) back[j] += (*nu)[i] * s.rows()[i][j];
    CHECK(back == v);
    CHECK_FALSE(s.contains(std::vector<i64>{0, 1, 2}));
    CHECK_FALSE(s.contains(std::vector<i64>{1, 0, 0}));
}

TEST_CASE("perp examples") {
    CHECK(perp(Subgroup::zero(2)) == Subgroup::full(2));
    CHECK(perp(Subgroup::from_generators(2, {{1, 1}})) == Subgroup::from_generators(2, {{1, -1}}));
    CHECK(perp(Subgroup::from_generators(2, {{2, 4}})) == Subgroup::from_generators(2, {{2, -1}}));
}

TEST_CASE("property: perp is idempotent after one application and contains the original") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<i64> ed(-6, 6);
    std::uniform_int_distribution<int> nd(2, 6);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = static_cast<std::size_t>(nd(rng));
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        Rows g(m, std::vector<i64>(n));
        for (auto& r : g)
            for (auto& x : r) x = ed(rng);
        const Subgroup lam = Subgroup::from_generators(n, g);
        const Subgroup p1 = perp(lam);
        const Subgroup p2 = perp(p1);
        CHECK(perp(p2) == p1);
        CHECK(p1.rank() + lam.rank() == n);
        for (const auto& r : lam.rows()) CHECK(p2.contains(r));
        for (const auto& r : p1.rows())
            for (const auto& w : lam.rows()) CHECK(oracle::dot(r, w) == 0);
    }
}

TEST_CASE("integer kernel is primitive") {
    const Subgroup k = integer_kernel({{2, 4, 6}}, 3);
    CHECK(k.rank() == 2);
    // (1,1,-1) is in the kernel; primitivity means it is a lattice vector, not just a rational one
    CHECK(k.contains(std::vector<i64>{1, 1, -1}));
    CHECK(k.contains(std::vector<i64>{2, -1, 0}));
    CHECK_FALSE(k.contains(std::vector<i64>{1, 0, 0}));
}

TEST_CASE("rho examples") {
    const Subgroup z2 = Subgroup::full(2);
    CHECK(rho({1, 1}, z2) == 1);
    CHECK(rho({1, 2}, z2) == 2);
    CHECK(rho({0, 5}, z2) == 1);
    for (i64 q : {5, 10, 20, 40, 80}) CHECK(rho({1, q}, z2) == q);
    // rank 1 subgroup Z(1,1) never annihilates (1,0)
    CHECK_FALSE(rho({1, 0}, Subgroup::from_generators(2, {{1, 1}})).has_value());
}

TEST_CASE("rho_p examples") {
    const Subgroup z2 = Subgroup::full(2);
    CHECK(rho_p({1, 2}, z2, 3) == 1);
    CHECK(rho_p({1, 2}, z2, 5) == 2);
    CHECK(rho_p({0, 0}, z2, 7) == 1);
}

TEST_CASE("rho and rho_p against box enumeration") {
    std::mt19937_64 rng(67);
    std::uniform_int_distribution<i64> ed(-400, 400);
    const std::vector<u64> primes{3, 5, 7, 11, 13, 101, 211};
    for (std::size_t n : {2u, 3u}) {
        const oracle::Lattice lat = oracle::full_lattice(n);
        for (int it = 0; it < 40; ++it) {
            std::vector<i64> a(n);
            for (auto& x : a) x = ed(rng);
            const u64 p = primes[static_cast<std::size_t>(it) % primes.size()];
            const i64 rp = rho_p(ExponentVector(a), Subgroup::full(n), p);
            CHECK(rp == oracle::min_annihilator(lat, a, static_cast<i64>(p), 1000));
            CHECK(rp <= static_cast<i64>(p));
            if (n == 3 || sup(a) < 100) {
                const auto r = rho(ExponentVector(a), Subgroup::full(n));
                CHECK(r == oracle::min_annihilator(lat, a, 0, n == 2 ? 400 : 80));
            }
        }
    }
}

TEST_CASE("rho_p on the order-9 period lattice against enumeration") {
    const Subgroup omega = gaussian_omega(9);
    const oracle::Lattice lat = oracle::omega9();
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<i64> cd(-30, 30);
    for (u64 p : {19u, 37u, 73u, 109u, 127u}) {
        std::vector<i64> a(8, 0);
        for (const auto& r : omega.rows()) {
            const i64 c = cd(rng);
            for (std::size_t j = 0; j < 8; ++j) a[j] += c * r[j];
        }
        CHECK(rho_p(ExponentVector(a), omega, p) == oracle::min_annihilator(lat, a, static_cast<i64>(p), 6));
    }
}

TEST_CASE("property: rho_p <= p min |omega_r|") {
    std::mt19937_64 rng(73);
    std::uniform_int_distribution<i64> ed(-10000, 10000);
    for (u64 f : {3u, 5u, 9u}) {
        const Subgroup omega = gaussian_omega(f);
        i64 min_row = INT64_MAX;
        for (const auto& r : omega.rows()) min_row = std::min(min_row, sup(r));
        for (u64 p : {7u, 31u, 97u, 331u}) {
            std::vector<i64> a(f - 1);
            for (auto& x : a) x = ed(rng);
            CHECK(rho_p(ExponentVector(a), omega, p) <= static_cast<i64>(p) * min_row);
        }
    }
}

TEST_CASE("shortest_sup_vector") {
    const ShortVector s = shortest_sup_vector({{1, 0}, {0, 1}}, 2);
    CHECK(s.norm == 1);
    const ShortVector t = shortest_sup_vector({{7, 0}, {3, 1}}, 2);
    // (3,1) has sup-norm 3; (1,-2) = 3*(3,1)... enumerate: -2*(3,1)+(7,0) = (1,-2)
    CHECK(t.norm == 2);
    CHECK(sup(t.vector) == 2);
    CHECK_THROWS_AS(shortest_sup_vector({{1, 0}, {0, 1}}, 2, 1), EnumerationLimit);
}

TEST_CASE("hypothesis_check examples") {
    CHECK(hypothesis_check(Subgroup::full(2)).holds);
    CHECK(hypothesis_check(Subgroup::full(4)).holds);

    const Subgroup bad = Subgroup::from_generators(4, {{1, 1, 1, 1}, {1, -1, 1, -1}});
    const HypothesisResult h = hypothesis_check(bad);
    CHECK_FALSE(h.holds);
    REQUIRE(h.witness.has_value());
    const auto& w = *h.witness;
    const std::vector<i64> v = w.v(4);
    CHECK(sup(v) > 0);
    for (const auto& r : bad.rows()) CHECK(oracle::dot(r, v) == 0);
    std::set<std::size_t> idx{w.i, w.j, w.k, w.l};
    CHECK(idx.size() == 4);
    CHECK(v == std::vector<i64>{1, 0, -1, 0});
    CHECK_THROWS_AS(hypothesis_check(Subgroup::from_generators(3, {{1, 2, 3}})), InputError);
}

TEST_CASE("Gaussian period lattices") {
    for (u64 f : {3u, 5u, 7u, 11u, 13u}) CHECK(gaussian_omega(f) == Subgroup::full(f - 1));
    CHECK(gaussian_omega(9).rank() == 6);
    CHECK(gaussian_omega(15).rank() == 8);
    CHECK(gaussian_omega(21).rank() == 12);
    for (u64 f : {3u, 5u, 7u, 9u, 15u}) CHECK(hypothesis_check(gaussian_omega(f)).holds);
    CHECK(gaussian_omega_any(2) == Subgroup::full(1));
    CHECK(gaussian_omega_any(4).rank() == 2);
    CHECK_THROWS_AS(gaussian_omega(4), InputError);
    CHECK_THROWS_AS(gaussian_omega(1), InputError);

    // the f = 9 lattice matches the independent description by its two relations
    const Subgroup o9 = gaussian_omega(9);
    const oracle::Lattice lat = oracle::omega9();
    for (const auto& r : o9.rows()) {
        std::vector<i64> w = r;
        lat.complete(w);
        CHECK(w == r);
    }
}

TEST_CASE("rank of the period lattice equals phi(f)") {
    for (u64 f = 3; f <= 35; f += 2) CHECK(gaussian_omega(f).rank() == euler_phi(f));
}

TEST_CASE("period_exponents examples") {
    const PeriodExponents a = period_exponents(7, 3);
    CHECK(a.u == 2);
    CHECK(a.a == ExponentVector{1, 3});
    const PeriodExponents b = period_exponents(5, 2);
    CHECK(b.u == 4);
    CHECK(b.a == ExponentVector{3});
    const PeriodExponents c = period_exponents(13, 3);
    CHECK(c.u == 3);
    CHECK(c.a == ExponentVector{2, 8});
    CHECK_THROWS_AS(period_exponents(13, 5), InputError);
}

TEST_CASE("the period exponents lie in the period lattice modulo p") {
    for (u64 f : {3u, 5u, 9u, 15u}) {
        const Subgroup lambda = perp(gaussian_omega(f));
        for (u64 p : primes_congruent_one(f, 400)) {
            const std::vector<i64> a = vec(period_exponents(p, f).a);
            for (const auto& r : lambda.rows()) CHECK(oracle::dot(r, a) % static_cast<i64>(p) == 0);
        }
    }
}

TEST_CASE("dirichlet_reduce examples") {
    const Subgroup z2 = Subgroup::full(2);
    const ReductionResult a = dirichlet_reduce({1, 600}, z2, 601);
    CHECK(a.t == 1);
    CHECK(a.omega == std::vector<i64>{0, 1});
    CHECK(a.a_prime == ExponentVector{1, -1});
    CHECK_FALSE(a.outside_regime);

    const ReductionResult b = dirichlet_reduce({1, 1}, z2, 5);
    CHECK(b.t == 1);
    CHECK(b.omega == std::vector<i64>{0, 0});
    CHECK(b.a_prime == ExponentVector{1, 1});

    const ReductionResult c = dirichlet_reduce({7, 7}, z2, 7);
    CHECK(c.outside_regime);
    CHECK_FALSE(c.a_prime.is_zero());

    CHECK_THROWS_AS(dirichlet_reduce({0, 0}, z2, 7), InputError);
    CHECK_THROWS_AS(dirichlet_reduce({1, 2}, Subgroup::from_generators(2, {{1, 1}}), 7), InputError);
}

TEST_CASE("property: reduction contract on random inputs") {
    std::mt19937_64 rng(79);
    const std::vector<Subgroup> lattices{Subgroup::full(2), Subgroup::full(3), gaussian_omega(9)};
    const std::vector<oracle::Lattice> oracles{oracle::full_lattice(2), oracle::full_lattice(3), oracle::omega9()};
    const std::vector<u64> primes = primes_up_to(400);
    for (int it = 0; it < 24; ++it) {
        const std::size_t which = static_cast<std::size_t>(it) % 3;
        const Subgroup& omega = lattices[which];
        const u64 p = primes[std::uniform_int_distribution<std::size_t>(1, primes.size() - 1)(rng)];
        std::uniform_int_distribution<i64> cd(0, 10 * static_cast<i64>(p));
        std::vector<i64> a(omega.ambient(), 0);
        for (const auto& r : omega.rows()) {
            const i64 c = cd(rng);
            for (std::size_t j = 0; j < a.size(); ++j) a[j] += c * r[j];
        }
        if (sup(a) == 0) continue;
        const ReductionResult red = dirichlet_reduce(ExponentVector(a), omega, p);
        REQUIRE_FALSE(red.outside_regime);
        const double m = static_cast<double>(omega.rank());
        double c = 0;
        for (const auto& r : omega.rows()) c += static_cast<double>(sup(r));
        CHECK(static_cast<double>(red.a_prime.sup_norm()) <= c * std::pow(static_cast<double>(p), 1 - 1 / m) + 1e-9);
        CHECK(red.quality <= std::pow(static_cast<double>(p - 1), -1 / m) + 1e-12);
        CHECK(omega.contains(red.a_prime.entries()));
        CHECK(red.t >= 1);
        CHECK(red.t < p);
        std::vector<i64> check(a.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            check[j] = static_cast<i64>(red.t) * a[j] - static_cast<i64>(p) * red.omega[j];
        CHECK(check == vec(red.a_prime));
        if (!red.a_prime.is_zero()) CHECK(delta_abs_exact(red.a_prime, p) == delta_abs_exact(ExponentVector(a), p));
        const auto rp = oracle::min_annihilator(oracles[which], a, static_cast<i64>(p), 40);
        REQUIRE(rp.has_value());
        CHECK(oracle::no_annihilator_below(oracles[which], vec(red.a_prime), *rp));
    }
}
