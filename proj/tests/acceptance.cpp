// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "gpnorm/arith.hpp"
#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/experiments.hpp"
#include "gpnorm/intpoly.hpp"
#include "gpnorm/lattice.hpp"
#include "gpnorm/mahler.hpp"
#include "gpnorm/rootfind.hpp"
#include "oracles.hpp"

using namespace gpnorm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

mpz_class ipow(u64 b, u64 e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

u64 random_prime(std::mt19937_64& rng, u64 lo, u64 hi) {
    std::uniform_int_distribution<u64> d(lo, hi);
    for (;;) {
        const u64 p = d(rng);
        if (oracle::is_prime(p)) return p;
    }
}

ExponentVector random_nonzero(std::mt19937_64& rng, std::size_t max_n, i64 bound) {
    std::uniform_int_distribution<std::size_t> nd(1, max_n);
    std::uniform_int_distribution<i64> ed(-bound, bound);
    for (;;) {
        std::vector<i64> v(nd(rng));
        for (auto& x : v) x = ed(rng);
        ExponentVector a(v);
        if (!a.is_zero()) return a;
    }
}

std::vector<i64> vec(const ExponentVector& a) { return {a.entries().begin(), a.entries().end()}; }

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome counting_identity() {
    std::size_t pairs = 0, failures = 0;
    for (u64 p : primes_up_to(61)) {
        for (u64 f = 2; f <= 6; ++f) {
            if ((p - 1) % f != 0) continue;
            const u64 k = (p - 1) / f;
            const auto reps = coset_representatives(p, f);
            const mpz_class count = myerson_partition_count(p, f, reps);
            const mpz_class delta = delta_signed_cosets(p, f).delta_signed;
            ++pairs;
            if (mpz_class(p) * count != ipow(f, k) + mpz_class(p - 1) * delta) ++failures;
        }
    }
    return {failures == 0, std::to_string(pairs) + " (p,f) pairs, " + std::to_string(failures) + " failures"};
}

Outcome unit_cases() {
    std::size_t f2 = 0, f4 = 0, bad = 0;
    for (u64 p : primes_up_to(1000)) {
        if (p < 3) continue;
        ++f2;
        if (delta_abs_exact(period_exponents(p, 2).a, p) != 1) ++bad;
        if (p % 4 == 1) {
            ++f4;
            if (abs(delta_signed_cosets(p, 4).delta_signed) != 1) ++bad;
        }
    }
    return {bad == 0, std::to_string(f2) + " primes with f=2, " + std::to_string(f4) + " with f=4, " +
                          std::to_string(bad) + " non-units"};
}

Outcome root_product_identity() {
    std::mt19937_64 rng(1001);
    std::size_t tested = 0, zero = 0, bad = 0;
    double worst = 0;
    while (tested < 200) {
        const ExponentVector a = random_nonzero(rng, 4, 30);
        const u64 p = random_prime(rng, 2, 101);
        const mpz_class d = delta_abs_exact(a, p);
        if (d == 0) {
            ++zero;
            continue;
        }
        ++tested;
        const RootSet r = find_roots(normalize(a).dense);
        const double rel = std::abs(std::expm1(delta_from_roots(a, p, r) - log_mpz(d)));
        worst = std::max(worst, rel);
        if (!(rel <= 1e-6)) ++bad;
    }
    return {bad == 0, std::to_string(tested) + " cases (" + std::to_string(zero) + " with Delta=0 redrawn), max rel " +
                          fmt("%.2e", worst)};
}

Outcome symmetries() {
    std::mt19937_64 rng(1002);
    std::size_t bad = 0;
    for (int it = 0; it < 200; ++it) {
        const ExponentVector a = random_nonzero(rng, 4, 200);
        const u64 p = random_prime(rng, 2, 101);
        const i64 t = std::uniform_int_distribution<i64>(1, static_cast<i64>(p) - 1)(rng);
        std::uniform_int_distribution<i64> bd(-50, 50);
        std::vector<i64> ta = vec(a), ab = vec(a);
        for (std::size_t i = 0; i < ta.size(); ++i) {
            ta[i] *= t;
            ab[i] += static_cast<i64>(p) * bd(rng);
        }
        const mpz_class d = delta_abs_exact(a, p);
        if (delta_abs_exact(ExponentVector(ta), p) != d || delta_abs_exact(ExponentVector(ab), p) != d) ++bad;
    }
    return {bad == 0, "200 (a,p,t,b), " + std::to_string(bad) + " mismatches"};
}

Outcome mahler_exactness() {
    double worst = std::abs(mahler_univariate(IntPoly::from_int64(std::vector<i64>{1, 1})).value);
    for (u64 n = 1; n <= 12; ++n) worst = std::max(worst, std::abs(mahler_univariate(cyclotomic(n)).value));
    const double two = std::abs(mahler_univariate(IntPoly::from_int64(std::vector<i64>{1, 2})).value - std::log(2.0));
    worst = std::max(worst, two);
    std::mt19937_64 rng(1003);
    std::size_t violations = 0;
    double slack = INFINITY;
    for (int it = 0; it < 100; ++it) {
        const ExponentVector a = random_nonzero(rng, 6, 40);
        const double m = mahler_univariate(IntPoly::from_int64(normalize(a).dense)).value;
        const double bound = std::log(static_cast<double>(a.size() + 1));
        slack = std::min(slack, bound - m);
        if (m > bound + 1e-12) ++violations;
    }
    return {worst <= 1e-10 && violations == 0,
            "max exact-case error " + fmt("%.1e", worst) + ", 100 random P_a within log(n+1) (min slack " +
                fmt("%.3g", slack) + ")"};
}

Outcome multivariate_target() {
    const double reference = oracle::smyth_constant();
    const MahlerEstimate m = mahler_multivariate(parse_poly("1+x1+x2"), 1'000'000, 0);
    const MahlerEstimate u = mahler_basis(ExponentMatrix::from_rows({{1, 0}, {1, 1}}), 1'000'000, 0);
    const bool near = std::abs(m.value - reference) <= 1e-3;
    const bool gl = std::abs(m.value - u.value) <= m.error_bound + u.error_bound + 1e-12;
    return {near && gl, "m=" + fmt("%.10f", m.value) + " +/- " + fmt("%.1e", m.error_bound) + ", oracle " +
                            fmt("%.10f", reference) + ", unimodular basis " + fmt("%.10f", u.value)};
}

Outcome convergence() {
    ConvergenceOptions opt;
    opt.f = 3;
    opt.p_min = 50;
    opt.p_max = 10000;
    const ExperimentReport r = run_convergence(opt);
    std::vector<double> low, high;
    const std::size_t cp = r.column("p"), ce = r.column("error");
    for (const auto& row : r.rows) {
        const u64 p = std::stoull(row[cp]);
        const double e = std::stod(row[ce]);
        if (p <= 200) low.push_back(e);
        if (p >= 3000) high.push_back(e);
    }
    const double ml = median(low), mh = median(high);
    return {mh < 0.02 && mh < ml && r.summary["identity_failures"] == 0,
            "median error " + fmt("%.3e", mh) + " on [3000,1e4] vs " + fmt("%.3e", ml) + " on [50,200]"};
}

Outcome period_lattices() {
    bool ok = true;
    for (u64 f : {3u, 5u, 7u}) ok = ok && gaussian_omega(f) == Subgroup::full(f - 1);
    ok = ok && gaussian_omega(9).rank() == 6;
    for (u64 f : {3u, 5u, 7u, 9u, 15u}) ok = ok && hypothesis_check(gaussian_omega(f)).holds;
    const Subgroup bad = Subgroup::from_generators(4, {{1, 1, 1, 1}, {1, -1, 1, -1}});
    const HypothesisResult h = hypothesis_check(bad);
    bool witness_ok = !h.holds && h.witness.has_value();
    std::string v;
    if (witness_ok) {
        const auto w = h.witness->v(4);
        witness_ok = oracle::sup_norm(w) > 0;
        for (const auto& row : bad.rows()) witness_ok = witness_ok && oracle::dot(row, w) == 0;
        for (std::size_t i = 0; i < w.size(); ++i) v += (i ? "," : "") + std::to_string(w[i]);
    }
    return {ok && witness_ok, "Z^{f-1} for f=3,5,7; rank 6 at f=9; counterexample witness v=(" + v + ")"};
}

Outcome reduction_contract() {
    std::mt19937_64 rng(1009);
    const std::vector<Subgroup> lattices{Subgroup::full(2), Subgroup::full(3), gaussian_omega(9)};
    const std::vector<oracle::Lattice> oracles{oracle::full_lattice(2), oracle::full_lattice(3), oracle::omega9()};
    const std::vector<u64> primes = primes_up_to(997);
    std::size_t tested = 0, bad = 0, outside = 0;
    while (tested < 100) {
        const std::size_t which = tested % 3;
        const Subgroup& omega = lattices[which];
        const u64 p = primes[std::uniform_int_distribution<std::size_t>(0, primes.size() - 1)(rng)];
        std::uniform_int_distribution<i64> cd(-20 * static_cast<i64>(p), 20 * static_cast<i64>(p));
        std::vector<i64> a(omega.ambient(), 0);
        for (const auto& row : omega.rows()) {
            const i64 c = cd(rng);
            for (std::size_t j = 0; j < a.size(); ++j) a[j] += c * row[j];
        }
        if (oracle::sup_norm(a) == 0) continue;
        const ReductionResult red = dirichlet_reduce(ExponentVector(a), omega, p);
        if (red.outside_regime) {
            ++outside;
            continue;
        }
        ++tested;
        double c = 0;
        for (const auto& row : omega.rows()) c += static_cast<double>(oracle::sup_norm(row));
        const double m = static_cast<double>(omega.rank());
        bool ok = static_cast<double>(red.a_prime.sup_norm()) <= c * std::pow(static_cast<double>(p), 1 - 1 / m);
        if (!red.a_prime.is_zero()) ok = ok && delta_abs_exact(red.a_prime, p) == delta_abs_exact(ExponentVector(a), p);
        const auto rp = oracle::min_annihilator(oracles[which], a, static_cast<i64>(p), 64);
        ok = ok && rp.has_value() && *rp == rho_p(ExponentVector(a), omega, p);
        ok = ok && rp.has_value() && oracle::no_annihilator_below(oracles[which], vec(red.a_prime), *rp);
        if (!ok) ++bad;
    }
    return {bad == 0, std::to_string(tested) + " reductions over Z^2, Z^3, Omega(9), " + std::to_string(bad) +
                          " violations (" + std::to_string(outside) + " inputs in p*Omega redrawn)"};
}

Outcome root_invariants() {
    std::mt19937_64 rng(1010);
    std::size_t sep_bad = 0, lb_bad = 0, sector_bad = 0, pairs = 0, skipped_arcs = 0, on_circle_other = 0;
    {
        std::uniform_int_distribution<int> dd(2, 25);
        std::uniform_int_distribution<i64> cd(-5, 5);
        int tested = 0;
        while (tested < 100) {
            std::vector<i64> c(static_cast<std::size_t>(dd(rng)) + 1);
            for (auto& x : c) x = cd(rng);
            if (c.back() == 0) c.back() = 1;
            const IntPoly f = squarefree_part(IntPoly::from_int64(c));
            if (f.degree() < 2) continue;
            ++tested;
            const RootSet r = find_roots(f);
            const double d = static_cast<double>(f.degree());
            const double log_bound =
                0.5 * std::log(3.0) - (d + 2) / 2 * std::log(d) - (d - 1) * mahler_univariate(f).value;
            for (std::size_t i = 0; i < r.roots.size(); ++i)
                for (std::size_t j = i + 1; j < r.roots.size(); ++j) {
                    ++pairs;
                    const double dist =
                        std::abs(r.roots[i].value - r.roots[j].value) + r.roots[i].radius + r.roots[j].radius;
                    if (!(std::log(dist) > log_bound)) ++sep_bad;
                }
        }
    }
    for (int it = 0; it < 100; ++it) {
        const ExponentVector a = random_nonzero(rng, 4, 30);
        const LacunaryPoly lp = normalize(a);
        if (lp.degree() == 0) continue;
        const u64 p = std::uniform_int_distribution<u64>(1, 100000)(rng);
        const RootSet r = find_roots(lp.dense);
        const double n1 = static_cast<double>(a.size() + 1), sa = static_cast<double>(a.sup_norm());
        for (const auto& x : r.roots) {
            if (x.circle.tag == CircleTag::RootOfUnity) {
                if (p % x.circle.order != 0 && log_pow_distance(x, p) < -2 * std::log(2 * sa)) ++lb_bad;
            } else if (x.circle.tag == CircleTag::OnCircleOther) {
                ++on_circle_other;
            } else if (log_pow_distance(x, p) < -18 * std::log(n1) * sa * std::log(2 * sa)) {
                ++lb_bad;
            }
        }
    }
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        const ExponentVector a = random_nonzero(rng, 5, 80);
        const LacunaryPoly lp = normalize(a);
        if (lp.degree() == 0) continue;
        const RootSet r = find_roots(lp.dense);
        for (int k = 0; k < 16; ++k) {
            try {
                if (!sector_count(r, Arc{ud(rng), ud(rng)}).within_bound()) ++sector_bad;
            } catch (const Indeterminate&) {
                ++skipped_arcs;
            }
        }
    }
    std::ostringstream os;
    os << pairs << " root pairs (" << sep_bad << " below separation), " << lb_bad << " lower-bound violations ("
       << on_circle_other << " unimodular non-torsion roots without a bound), " << sector_bad
       << " sector violations, " << skipped_arcs << " indeterminate arcs";
    return {sep_bad == 0 && lb_bad == 0 && sector_bad == 0, os.str()};
}

Outcome lawton_rate() {
    const MultiPoly p = parse_poly("1+x1+x2");
    const ExperimentReport law = run_lawton_rate(p, {5, 10, 20, 40, 80}, 1'000'000, 0);
    const std::size_t ce = law.column("error");
    const double e5 = std::abs(std::stod(law.rows.front()[ce])), e80 = std::abs(std::stod(law.rows.back()[ce]));
    const ExperimentReport sub = run_sublevel(p, {0.1, 0.05, 0.025}, 4'000'000, 0);
    const std::size_t cv = sub.column("volume");
    bool decreasing = true;
    for (std::size_t i = 1; i < sub.rows.size(); ++i)
        decreasing = decreasing && std::stod(sub.rows[i][cv]) > std::stod(sub.rows[i - 1][cv]);
    const double slope = sub.summary["fitted_slope"].get<double>();
    return {e80 < 0.05 && e80 < e5 && decreasing && slope >= 0.25,
            "|err(80)|=" + fmt("%.3e", e80) + " < |err(5)|=" + fmt("%.3e", e5) + ", sublevel slope " +
                fmt("%.3f", slope)};
}

Outcome small_sums() {
    SumsOptions opt;
    opt.f = 5;
    opt.p_min = 2;
    opt.p_max = 2000;
    opt.lambdas = {1.0};
    opt.c = 1.0;
    const ExperimentReport r = run_small_sums_census(opt);
    const bool match = r.summary["all_scalar_match"].get<bool>();
    const auto& g = r.summary["growth_exponent"]["1"];
    return {match, std::to_string(r.rows.size()) + " primes, scalar recount agrees: " + (match ? "yes" : "no") +
                       ", total count " + r.summary["total_counts"]["1"].dump() + ", growth exponent " + g.dump()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"counting identity", 10, counting_identity},
        {"unit cases", 30, unit_cases},
        {"root-product identity", 60, root_product_identity},
        {"norm symmetries", 60, symmetries},
        {"Mahler exactness", 10, mahler_exactness},
        {"multivariate target", 60, multivariate_target},
        {"convergence experiment", 600, convergence},
        {"period lattices", 10, period_lattices},
        {"reduction contract", 120, reduction_contract},
        {"root invariants", 120, root_invariants},
        {"Lawton rate", 300, lawton_rate},
        {"small-sums census", 120, small_sums},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs < c.limit_s;
        failures += !pass;
        std::printf("%s %2zu %-24s %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                    o.detail.c_str(), secs, c.limit_s);
        std::fflush(stdout);
    }
    return failures;
}
