#include "gpnorm/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "gpnorm/arith.hpp"
#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/parallel.hpp"
#include "gpnorm/rootfind.hpp"

namespace gpnorm {

namespace {

constexpr u64 kShifts = 8;
constexpr u64 kMinBudget = kShifts * 64;

std::vector<std::size_t> used_variables(const MultiPoly& p) {
    std::vector<std::size_t> used;
    for (std::size_t v = 0; v < p.nvars(); ++v) {
        for (const auto& [e, c] : p.terms()) {
            if (e[v] != 0) {
                used.push_back(v);
                break;
            }
        }
    }
    return used;
}

// Dense integer polynomial in variable v, shifted so that the lowest exponent is 0.
IntPoly project(const MultiPoly& p, std::size_t v) {
    i64 lo = std::numeric_limits<i64>::max(), hi = std::numeric_limits<i64>::min();
    for (const auto& [e, c] : p.terms()) {
        lo = std::min(lo, e[v]);
        hi = std::max(hi, e[v]);
    }
    std::vector<mpz_class> dense(static_cast<std::size_t>(hi - lo) + 1, 0);
    for (const auto& [e, c] : p.terms()) dense[static_cast<std::size_t>(e[v] - lo)] += static_cast<long>(c);
    return IntPoly(std::move(dense));
}

// m(c_0 + c_1 X + ... + c_d X^d) for complex coefficients.
double jensen_complex(std::vector<std::complex<double>>& c) {
    double scale = 0.0;
    for (const auto& x : c) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return std::numeric_limits<double>::quiet_NaN();
    while (c.size() > 1 && std::abs(c.back()) < 1e-30 * scale) c.pop_back();
    if (c.size() == 1) return std::log(std::abs(c[0]));
    if (c.size() == 2) return std::log(std::max(std::abs(c[0]), std::abs(c[1])));
    double m = std::log(std::abs(c.back()));
    for (const auto& r : solve_complex(c)) m += std::max(0.0, std::log(std::abs(r)));
    return m;
}

// Inner Jensen integrand: P(e(x), X) as a polynomial in the inner variable.
class NestedIntegrand {
public:
    NestedIntegrand(const MultiPoly& p, std::size_t inner, std::vector<std::size_t> outer) : outer_(std::move(outer)) {
        i64 lo = std::numeric_limits<i64>::max(), hi = std::numeric_limits<i64>::min();
        for (const auto& [e, c] : p.terms()) {
            lo = std::min(lo, e[inner]);
            hi = std::max(hi, e[inner]);
        }
        degree_ = static_cast<std::size_t>(hi - lo);
        for (const auto& [e, c] : p.terms()) {
            Term t;
            t.k = static_cast<std::size_t>(e[inner] - lo);
            t.coeff = static_cast<double>(c);
            for (auto v : outer_) t.exps.push_back(e[v]);
            terms_.push_back(std::move(t));
        }
    }

    std::size_t dims() const { return outer_.size(); }

    // NaN when the inner polynomial vanishes identically at this node.
    double operator()(std::span<const double> x, std::vector<std::complex<double>>& buf) const {
        buf.assign(degree_ + 1, 0.0);
        for (const auto& t : terms_) {
            double turns = 0.0;
            for (std::size_t j = 0; j < t.exps.size(); ++j) turns += frac_product(t.exps[j], x[j]);
            buf[t.k] += t.coeff * unit_phase(turns);
        }
        return jensen_complex(buf);
    }

private:
    struct Term {
        std::size_t k;
        double coeff;
        std::vector<i64> exps;
    };
    std::vector<std::size_t> outer_;
    std::size_t degree_ = 0;
    std::vector<Term> terms_;
};

// Inner variable: a single monomial at the top degree if possible, then the smallest degree span.
std::size_t choose_inner(const MultiPoly& p, const std::vector<std::size_t>& used) {
    std::size_t best = used.front();
    std::tuple<int, i64> best_key{2, std::numeric_limits<i64>::max()};
    for (auto v : used) {
        i64 lo = std::numeric_limits<i64>::max(), hi = std::numeric_limits<i64>::min();
        for (const auto& [e, c] : p.terms()) {
            lo = std::min(lo, e[v]);
            hi = std::max(hi, e[v]);
        }
        int top_terms = 0;
        for (const auto& [e, c] : p.terms()) top_terms += e[v] == hi ? 1 : 0;
        const std::tuple<int, i64> key{top_terms == 1 ? 0 : 1, hi - lo};
        if (key < best_key) {
            best_key = key;
            best = v;
        }
    }
    return best;
}

u64 largest_prime_at_most(u64 n) {
    while (n > 2 && !is_prime(n)) --n;
    return n;
}

double bernoulli2(double x) { return x * x - x + 1.0 / 6.0; }

}  // namespace

const char* to_string(MahlerMethod m) {
    return m == MahlerMethod::ExactJensen ? "exact_jensen" : "nested_quadrature";
}

MahlerEstimate mahler_univariate(const IntPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    MahlerEstimate out;
    if (f.degree() == 0) {
        out.value = log_mpz(abs(f.leading()));
        return out;
    }
    const RootSet r = find_roots(f);
    out.value = mahler_from_roots(r);
    double err = 4 * std::numeric_limits<double>::epsilon() * (1 + std::abs(out.value));
    for (const auto& root : r.roots) {
        if (root.circle.tag == CircleTag::Outside) err += root.multiplicity * root.radius / std::exp(root.log_abs);
    }
    out.error_bound = err;
    return out;
}

MahlerEstimate mahler_univariate(const MultiPoly& p) {
    if (p.is_zero()) throw ZeroPolynomial();
    const auto used = used_variables(p);
    if (used.size() > 1) throw InputError("mahler_univariate: polynomial in more than one variable");
    if (used.empty()) return mahler_univariate(IntPoly(std::vector<mpz_class>{static_cast<long>(p.constant_term())}));
    return mahler_univariate(project(p, used.front()));
}

std::vector<u64> lattice_rule_vector(u64 n, std::size_t s) {
    if (s == 0) return {};
    if (s == 1 || n < 3) return std::vector<u64>(s, 1);
    std::mt19937_64 rng(n);
    std::vector<u64> candidates;
    for (int i = 0; i < 48; ++i) candidates.push_back(2 + rng() % (n - 2));
    std::vector<u64> best;
    double best_p2 = std::numeric_limits<double>::infinity();
    for (u64 g : candidates) {
        std::vector<u64> z(s);
        z[0] = 1;
        for (std::size_t j = 1; j < s; ++j) z[j] = mul_mod(z[j - 1], g, n);
        double sum = 0.0;
        for (u64 k = 0; k < n; ++k) {
            double prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                const double x = static_cast<double>(mul_mod(k, z[j], n)) / static_cast<double>(n);
                prod *= 1.0 + 2.0 * std::numbers::pi * std::numbers::pi * bernoulli2(x);
            }
            sum += prod;
        }
        const double p2 = sum / static_cast<double>(n) - 1.0;
        if (p2 < best_p2) {
            best_p2 = p2;
            best = z;
        }
    }
    return best;
}

MahlerEstimate mahler_multivariate(const MultiPoly& p, u64 budget, u64 seed) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (budget < kMinBudget) {
        throw BudgetTooSmall("budget " + std::to_string(budget) + " is below " + std::to_string(kMinBudget) +
                             " (8 shifts of 64 nodes)");
    }
    if (p.term_count() == 1) {
        // |c X^e| = |c| on the torus
        MahlerEstimate out;
        out.value = std::log(std::abs(static_cast<double>(p.terms().begin()->second)));
        return out;
    }
    const auto used = used_variables(p);
    if (used.size() <= 1) return mahler_univariate(p);

    const std::size_t inner = choose_inner(p, used);
    std::vector<std::size_t> outer;
    for (auto v : used) {
        if (v != inner) outer.push_back(v);
    }
    const NestedIntegrand integrand(p, inner, outer);
    const std::size_t s = outer.size();
    const u64 n = largest_prime_at_most(budget / kShifts);
    const auto z = lattice_rule_vector(n, s);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> shifts(kShifts, std::vector<double>(s));
    for (auto& sh : shifts) {
        for (auto& x : sh) x = static_cast<double>(rng() >> 11) * 0x1p-53;
    }

    // Each shift is summed in node order by one worker.
    std::vector<double> means(kShifts);
    parallel_for(kShifts, [&](std::size_t r) {
        std::vector<double> x(s), vals;
        std::vector<std::complex<double>> buf;
        vals.reserve(n);
        for (u64 k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < s; ++j) {
                const double base = static_cast<double>(mul_mod(k, z[j], n)) / static_cast<double>(n);
                double v = base + shifts[r][j];
                if (v >= 1.0) v -= 1.0;
                x[j] = v;
            }
            const double f = integrand(x, buf);
            if (!std::isnan(f)) vals.push_back(f);
        }
        means[r] = pairwise_sum(vals) / static_cast<double>(vals.size());
    });
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= kShifts;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (kShifts - 1);
    MahlerEstimate out;
    out.value = mean;
    out.error_bound = 3.0 * std::sqrt(var / kShifts);
    out.method = MahlerMethod::NestedQuadrature;
    out.samples_used = n * kShifts;
    return out;
}

MahlerEstimate mahler_basis(const ExponentMatrix& a, u64 budget, u64 seed) {
    const MultiPoly p = MultiPoly::from_matrix(a);
    if (a.rows() == 1) return mahler_univariate(p);
    return mahler_multivariate(p, budget, seed);
}

MahlerEstimate mahler_subgroup(const Subgroup& omega, u64 budget, u64 seed) {
    if (omega.rank() == 0) throw InputError("mahler_subgroup: rank must be >= 1");
    return mahler_basis(omega.basis(), budget, seed);
}

SublevelEstimate sublevel_volume(const MultiPoly& p, double y, u64 budget, u64 seed) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (!(y > 0)) throw InputError("sublevel_volume: y must be > 0");
    if (budget < kMinBudget) throw BudgetTooSmall("budget " + std::to_string(budget) + " is below " + std::to_string(kMinBudget));
    const std::size_t n = p.nvars();
    std::mt19937_64 rng(seed);
    std::vector<double> x(n);
    u64 hits = 0;
    for (u64 i = 0; i < budget; ++i) {
        for (auto& v : x) v = static_cast<double>(rng() >> 11) * 0x1p-53;
        if (std::abs(p.evaluate_on_torus(x)) < y) ++hits;
    }
    SublevelEstimate out;
    out.samples = budget;
    out.volume = static_cast<double>(hits) / static_cast<double>(budget);
    out.half_width = 3.0 * std::sqrt(out.volume * (1 - out.volume) / static_cast<double>(budget));
    return out;
}

LawtonError lawton_error(const MultiPoly& p, const ExponentVector& a, u64 budget, u64 seed) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (a.size() != p.nvars()) {
        throw DimensionMismatch("exponent vector of length " + std::to_string(a.size()) + " for a polynomial in " +
                                std::to_string(p.nvars()) + " variables");
    }
    const MultiPoly q = p.substitute(a.entries());
    if (q.is_zero()) throw ZeroPolynomial();
    LawtonError out;
    out.univariate = mahler_univariate(q).value;
    out.multivariate = p.nvars() == 1 ? mahler_univariate(p) : mahler_multivariate(p, budget, seed);
    out.error = out.univariate - out.multivariate.value;
    out.error_bound = out.multivariate.error_bound;
    return out;
}

}  // namespace gpnorm
