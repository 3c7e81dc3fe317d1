#include "gpnorm/rootfind.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "aberth.hpp"
#include "gpnorm/arith.hpp"
#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"

namespace gpnorm {

namespace {

using detail::Cx;

constexpr double kUnit = 0x1p-53;

// Cache of exact tests Phi_N | F_sf for one polynomial.
class CyclotomicTest {
public:
    explicit CyclotomicTest(const IntPoly& f_sf) : f_(f_sf) {}
    bool divides(u64 n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        const IntPoly phi = cyclotomic(n);
        const bool r = phi.degree() <= f_.degree() && remainder_monic(f_, phi).is_zero();
        cache_.emplace(n, r);
        return r;
    }

private:
    const IntPoly& f_;
    std::map<u64, bool> cache_;
};

// Continued-fraction convergents h/N of x in [0, 1) with N <= max_den.
std::vector<std::pair<u64, u64>> convergents(double x, u64 max_den) {
    std::vector<std::pair<u64, u64>> out;
    long double rem = x;
    u64 h0 = 1, k0 = 0, h1 = 0, k1 = 1;  // h_{-1}/k_{-1}, h_{-2}/k_{-2}
    for (int step = 0; step < 64; ++step) {
        const long double fl = std::floor(rem);
        const u64 a = static_cast<u64>(fl);
        const u64 h = a * h0 + h1;
        const u64 k = a * k0 + k1;
        if (k > max_den) break;
        out.emplace_back(h, k);
        h1 = h0;
        k1 = k0;
        h0 = h;
        k0 = k;
        const long double frac = rem - fl;
        if (frac < 1e-18L) break;
        rem = 1.0L / frac;
    }
    return out;
}

using Distance = std::function<double(u64 k, u64 n)>;

CircleClass classify_impl(const Root& alpha, double floor, CyclotomicTest& cyclo, std::size_t deg, bool top,
                          const Distance& dist) {
    if (!std::isfinite(alpha.log_abs)) return {CircleTag::Inside, 0, 0, true};
    const double dev = std::abs(std::expm1(alpha.log_abs));
    const double rel_radius = alpha.radius;  // radius relative to |alpha| ~ 1 near the circle
    const bool candidate = dev <= rel_radius + floor || (top && dev < 1e-40);
    if (!candidate) {
        return {alpha.log_abs < 0 ? CircleTag::Inside : CircleTag::Outside, 0, 0, true};
    }
    const u64 max_den = std::max<u64>(2, 2 * static_cast<u64>(deg) * static_cast<u64>(deg));
    for (auto [h, n] : convergents(alpha.arg_turns, max_den)) {
        if (euler_phi(n) > deg) continue;
        const u64 k = h % n;
        if (std::gcd(k, n) != 1 && n != 1) continue;
        if (dist(k, n) > alpha.radius * (1 + 1e-9) + 64 * kUnit) continue;
        if (cyclo.divides(n)) return {CircleTag::RootOfUnity, n, k, true};
    }
    if (!top) throw Indeterminate("root on or near the unit circle is not a root of unity at this precision");
    // never certified: the dichotomy root of unity / off the circle is the only exact statement
    return {CircleTag::OnCircleOther, 0, 0, false};
}

template <class T>
Cx<T> to_cx(const mpz_class& c) {
    if constexpr (std::is_same_v<T, double>) {
        return Cx<T>(c.get_d());
    } else {
        return Cx<T>(T(c.get_str()));
    }
}

struct FactorAttempt {
    bool ok = false;
    std::vector<Root> roots;
    std::vector<std::complex<double>> approx;  // warm start for the next precision
};

template <class T>
FactorAttempt solve_factor(const IntPoly& s, int multiplicity, std::size_t factor_index,
                           const std::vector<std::complex<double>>& warm, double floor, CyclotomicTest& cyclo,
                           std::size_t deg_sf, bool top) {
    using std::abs;
    using std::atan2;
    using std::cos;
    using std::log;
    using std::sin;
    const std::size_t d = static_cast<std::size_t>(s.degree());
    std::vector<Cx<T>> c;
    c.reserve(d + 1);
    for (const auto& v : s.coeffs()) c.push_back(to_cx<T>(v));
    std::vector<Cx<T>> z;
    if (warm.size() == d) {
        for (auto w : warm) z.emplace_back(T(w.real()), T(w.imag()));
    } else {
        z = detail::initial_points(c);
    }
    const int max_iter = 200 + 20 * static_cast<int>(d);
    auto res = detail::aberth(c, std::move(z), max_iter);
    FactorAttempt out;
    for (const auto& r : res.roots) out.approx.emplace_back(detail::to_double(r.re), detail::to_double(r.im));
    if (!res.converged || !res.isolated) return out;

    const T two_pi = boost::math::constants::two_pi<T>();
    for (std::size_t i = 0; i < d; ++i) {
        const auto& zi = res.roots[i];
        const T az = detail::abs(zi);
        Root root;
        root.value = out.approx[i];
        root.multiplicity = multiplicity;
        root.factor = factor_index;
        const double radius = detail::to_double(res.radii[i]);
        root.radius = radius * (1 + 1e-12);
        if (az == 0) {
            root.log_abs = -std::numeric_limits<double>::infinity();
            root.arg_turns = 0.0;
        } else {
            root.log_abs = detail::to_double(T(log(az)));
            T t = atan2(zi.im, zi.re) / two_pi;
            if (t < 0) t += 1;
            root.arg_turns = detail::to_double(t);
            if (root.arg_turns >= 1.0) root.arg_turns = 0.0;
        }
        const Distance dist = [&](u64 k, u64 n) {
            const T ang = two_pi * T(static_cast<double>(k)) / T(static_cast<double>(n));
            return detail::to_double(detail::abs(zi - Cx<T>(cos(ang), sin(ang))));
        };
        try {
            root.circle = classify_impl(root, floor, cyclo, deg_sf, top, dist);
        } catch (const Indeterminate&) {
            return out;
        }
        out.roots.push_back(root);
    }
    out.ok = true;
    return out;
}

std::atomic<int> g_default_bits{53};

int rung(int bits) {
    if (bits <= 53) return 0;
    if (bits <= 106) return 1;
    return 2;
}

}  // namespace

const char* to_string(CircleTag tag) {
    switch (tag) {
        case CircleTag::Inside: return "inside";
        case CircleTag::Outside: return "outside";
        case CircleTag::RootOfUnity: return "root_of_unity";
        case CircleTag::OnCircleOther: return "on_circle_other";
    }
    return "?";
}

int default_precision_bits() { return g_default_bits.load(); }

void set_default_precision_bits(int bits) {
    if (bits != 53 && bits != 106 && bits != 212) throw InputError("precision must be 53, 106 or 212 bits");
    g_default_bits.store(bits);
}

std::size_t RootSet::multiplicity_total() const {
    std::size_t s = 0;
    for (const auto& r : roots) s += static_cast<std::size_t>(r.multiplicity);
    return s;
}

double circle_separation_floor(const IntPoly& f_sf) {
    const long d = f_sf.degree();
    if (d < 1) return 0.0;
    mpz_class sq = 0;
    for (const auto& c : f_sf.coeffs()) sq += c * c;
    const double log_norm = 0.5 * log_mpz(sq);
    const double dd = static_cast<double>(d);
    return std::exp(-1.0 - (dd + 1) * std::log(2 * dd) - 2 * (2 * dd - 1) * log_norm);
}

RootSet find_roots(const IntPoly& f, int min_precision_bits) {
    if (f.is_zero()) throw ZeroPolynomial();
    if (f.degree() < 1) throw InputError("find_roots needs degree >= 1, got constant " + f.to_string());
    if (min_precision_bits == 0) min_precision_bits = default_precision_bits();
    RootSet out;
    out.leading = f.leading();
    out.degree = static_cast<std::size_t>(f.degree());
    out.term_count = f.term_count();
    out.squarefree = squarefree_part(f);

    // Split off X^k.
    std::size_t zeros = 0;
    while (f[zeros] == 0) ++zeros;
    std::vector<mpz_class> rest(f.coeffs().begin() + static_cast<long>(zeros), f.coeffs().end());
    const IntPoly g(std::move(rest));
    if (zeros > 0) {
        out.factors.emplace_back(IntPoly(std::vector<mpz_class>{0, 1}), static_cast<int>(zeros));
        Root r;
        r.value = 0.0;
        r.multiplicity = static_cast<int>(zeros);
        r.log_abs = -std::numeric_limits<double>::infinity();
        r.circle = {CircleTag::Inside, 0, 0, true};
        r.factor = 0;
        out.roots.push_back(r);
    }
    const double floor = circle_separation_floor(out.squarefree);
    CyclotomicTest cyclo(out.squarefree);
    const std::size_t deg_sf = static_cast<std::size_t>(out.squarefree.degree());
    int top_rung = rung(min_precision_bits);
    if (g.degree() >= 1) {
        for (auto& [s, mult] : squarefree_decomposition(g)) {
            const std::size_t idx = out.factors.size();
            out.factors.emplace_back(s, mult);
            std::vector<std::complex<double>> warm;
            bool solved = false;
            for (int k = rung(min_precision_bits); k <= 2 && !solved; ++k) {
                const bool top = k == 2;
                FactorAttempt a;
                if (k == 0) {
                    a = solve_factor<double>(s, mult, idx, warm, floor, cyclo, deg_sf, top);
                } else if (k == 1) {
                    a = solve_factor<detail::Real106>(s, mult, idx, warm, floor, cyclo, deg_sf, top);
                } else {
                    a = solve_factor<detail::Real212>(s, mult, idx, warm, floor, cyclo, deg_sf, top);
                }
                if (a.ok) {
                    solved = true;
                    top_rung = std::max(top_rung, k);
                    out.roots.insert(out.roots.end(), a.roots.begin(), a.roots.end());
                } else {
                    warm = std::move(a.approx);
                }
            }
            if (!solved) {
                throw NonConvergence("root iteration failed at 212 bits for factor " + s.to_string() +
                                     " of degree " + std::to_string(s.degree()));
            }
        }
    }
    out.precision_bits = top_rung == 0 ? 53 : top_rung == 1 ? 106 : 212;
    return out;
}

RootSet find_roots(std::span<const i64> dense) { return find_roots(IntPoly::from_int64(dense)); }

CircleClass classify_root(const Root& alpha, const IntPoly& f_sf, bool top_precision) {
    CyclotomicTest cyclo(f_sf);
    const Distance dist = [&](u64 k, u64 n) {
        return std::abs(alpha.value - unit_root(static_cast<i64>(k), static_cast<i64>(n))) - 8 * kUnit;
    };
    return classify_impl(alpha, circle_separation_floor(f_sf), cyclo, static_cast<std::size_t>(f_sf.degree()),
                         top_precision, dist);
}

double log_pow_distance(LogPolar alpha, u64 p, double rel_err) {
    if (!std::isfinite(alpha.log_abs)) throw InputError("log_pow_distance: alpha = 0");
    if (p == 0) throw InputError("log_pow_distance: p must be >= 1");
    const double pd = static_cast<double>(p);
    const double big_p = pd * alpha.log_abs;
    double phase = frac_product(static_cast<i64>(p), alpha.arg_turns - std::floor(alpha.arg_turns));
    phase = std::min(phase, 1.0 - phase);
    const double s = std::sin(std::numbers::pi * phase);
    double q, value;
    if (big_p <= 0) {
        const double e = std::expm1(big_p);
        q = e * e + 4 * std::exp(big_p) * s * s;
        value = 0.5 * std::log(q);
    } else {
        const double e = std::expm1(-big_p);
        q = e * e + 4 * std::exp(-big_p) * s * s;
        value = big_p + 0.5 * std::log(q);
    }
    if (std::sqrt(q) <= pd * (rel_err + 16 * kUnit)) {
        throw PoleAtOne("alpha^" + std::to_string(p) + " = 1 within certification");
    }
    return value;
}

double log_pow_distance(const Root& alpha, u64 p) {
    if (alpha.circle.tag == CircleTag::RootOfUnity) {
        const u64 n = alpha.circle.order;
        if (p % n == 0) throw PoleAtOne("root of unity of order " + std::to_string(n) + " divides p = " + std::to_string(p));
        const u64 j = mul_mod(alpha.circle.index, p % n, n);
        return std::log(2 * std::abs(std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n))));
    }
    const double mod = std::exp(alpha.log_abs);
    return log_pow_distance({alpha.log_abs, alpha.arg_turns}, p, alpha.radius / mod);
}

namespace {

// log|alpha^{-p} - 1| for a root outside the circle.
double log_inverse_pow_distance(const Root& alpha, u64 p) {
    const double mod = std::exp(alpha.log_abs);
    double arg = -alpha.arg_turns;
    if (arg < 0) arg += 1.0;
    return log_pow_distance({-alpha.log_abs, arg}, p, alpha.radius / mod);
}

}  // namespace

BSet bset(const RootSet& r, u64 p, double lambda) {
    if (lambda < 1) throw InputError("bset: lambda must be >= 1");
    const double threshold = -lambda * std::log(static_cast<double>(p));
    BSet out;
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
        const Root& root = r.roots[i];
        if (root.circle.tag != CircleTag::Inside && root.circle.tag != CircleTag::Outside) continue;
        if (!std::isfinite(root.log_abs)) continue;
        double v;
        try {
            v = root.circle.tag == CircleTag::Inside ? log_pow_distance(root, p) : log_inverse_pow_distance(root, p);
        } catch (const PoleAtOne&) {
            throw Indeterminate("bset: |alpha^p - 1| not separated from 0");
        }
        if (v < threshold) {
            out.indices.push_back(i);
            out.count += static_cast<std::size_t>(root.multiplicity);
        }
    }
    return out;
}

BSet bset(const ExponentVector& a, u64 p, double lambda) {
    if (a.is_zero()) throw InputError("bset: a = 0");
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
    const auto lp = normalize(a);
    if (lp.degree() < 1) return {};
    return bset(find_roots(lp.dense), p, lambda);
}

double delta_from_roots(const ExponentVector& a, u64 p, const RootSet& r) {
    if (a.is_zero()) throw InputError("delta_from_roots: a = 0");
    std::vector<double> terms;
    terms.push_back(static_cast<double>(p) * log_mpz(abs(r.leading)));
    terms.push_back(-std::log(static_cast<double>(a.size() + 1)));
    for (const auto& root : r.roots) terms.push_back(root.multiplicity * log_pow_distance(root, p));
    return pairwise_sum(terms);
}

SectorCount sector_count(const RootSet& r, Arc arc) {
    SectorCount out;
    out.bound = arc.length_turns * static_cast<double>(r.degree) + static_cast<double>(r.term_count);
    const bool full = arc.length_turns >= 1.0;
    for (const auto& root : r.roots) {
        if (!std::isfinite(root.log_abs)) continue;  // zero roots have no argument
        double pos, delta;
        if (root.circle.tag == CircleTag::RootOfUnity) {
            pos = static_cast<double>(root.circle.index) / static_cast<double>(root.circle.order);
            delta = 0.0;
        } else {
            pos = root.arg_turns;
            const double mod = std::exp(root.log_abs);
            delta = std::asin(std::min(1.0, root.radius / mod)) / (2 * std::numbers::pi) + 4 * kUnit;
        }
        if (full) {
            out.count += static_cast<std::size_t>(root.multiplicity);
            continue;
        }
        double rel = pos - arc.start_turns;
        rel -= std::floor(rel);
        if (delta > 0 && (rel < delta || 1.0 - rel < delta || std::abs(rel - arc.length_turns) < delta)) {
            throw Indeterminate("sector_count: root argument straddles the arc boundary");
        }
        if (rel < arc.length_turns) out.count += static_cast<std::size_t>(root.multiplicity);
    }
    return out;
}

double mahler_from_roots(const RootSet& r) {
    std::vector<double> terms{log_mpz(abs(r.leading))};
    for (const auto& root : r.roots) {
        if (root.circle.tag == CircleTag::Outside) terms.push_back(root.multiplicity * root.log_abs);
    }
    return pairwise_sum(terms);
}

ResidualTable residual_decomposition(const ExponentVector& a, u64 p, double lambda) {
    if (a.is_zero()) throw InputError("residual_decomposition: a = 0");
    const mpz_class delta = delta_abs_exact(a, p);
    if (delta == 0) throw DeltaZero("Delta_p(a) = 0 for a = (" + a.to_string() + "), p = " + std::to_string(p));
    ResidualTable out;
    out.log_mean = log_mpz(delta) / static_cast<double>(p - 1);
    const auto lp = normalize(a);
    if (lp.degree() < 1) {
        out.mahler = std::log(static_cast<double>(lp.dense[0]));
        out.aggregate = std::abs(out.log_mean - out.mahler);
        return out;
    }
    const RootSet r = find_roots(lp.dense);
    const BSet b = bset(r, p, lambda);
    out.mahler = mahler_from_roots(r);
    out.aggregate = std::abs(out.log_mean - out.mahler);
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
        const Root& root = r.roots[i];
        const double res = root.circle.tag == CircleTag::Outside ? log_inverse_pow_distance(root, p)
                                                                  : log_pow_distance(root, p);
        const bool in_b = std::find(b.indices.begin(), b.indices.end(), i) != b.indices.end();
        out.rows.push_back({i, root.value, root.multiplicity, root.circle, std::abs(res), in_b});
    }
    return out;
}

std::vector<std::complex<double>> solve_complex(std::span<const std::complex<double>> c) {
    std::size_t lo = 0;
    while (lo < c.size() && c[lo] == 0.0) ++lo;
    if (lo == c.size()) throw ZeroPolynomial();
    if (c.back() == 0.0) throw InputError("solve_complex: leading coefficient is zero");
    std::vector<std::complex<double>> out(lo, 0.0);
    const std::size_t d = c.size() - 1 - lo;
    if (d == 0) return out;
    if (d == 1) {
        out.push_back(-c[lo] / c[lo + 1]);
        return out;
    }
    std::vector<Cx<double>> cc;
    for (std::size_t k = lo; k < c.size(); ++k) cc.emplace_back(c[k].real(), c[k].imag());
    auto res = detail::aberth(cc, detail::initial_points(cc), 400 + 20 * static_cast<int>(d));
    if (!res.converged) {
        // Failure to meet the stopping rule in double is tolerated when the residuals are small.
        for (const auto& z : res.roots) {
            const auto ev = detail::evaluate(cc, z);
            if (detail::abs(ev.value) > 1e6 * ev.error_bound) {
                throw NonConvergence("solve_complex: no convergence for degree " + std::to_string(d));
            }
        }
    }
    for (const auto& z : res.roots) out.emplace_back(z.re, z.im);
    return out;
}

}  // namespace gpnorm
