#include "gpnorm/intpoly.hpp"

#include <sstream>
#include <stdexcept>

#include "gpnorm/arith.hpp"

namespace gpnorm {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::from_int64(std::span<const std::int64_t> coeffs) {
    std::vector<mpz_class> c;
    c.reserve(coeffs.size());
    for (auto v : coeffs) c.emplace_back(static_cast<long>(v));
    return IntPoly(std::move(c));
}

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::size_t IntPoly::term_count() const noexcept {
    std::size_t n = 0;
    for (const auto& v : c_) n += (v != 0);
    return n;
}

std::vector<double> IntPoly::to_double() const {
    std::vector<double> out;
    out.reserve(c_.size());
    for (const auto& v : c_) out.push_back(v.get_d());
    return out;
}

std::string IntPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (c_[k] > 0 && !first) os << "+";
        first = false;
        if (k == 0) {
            os << c_[k].get_str();
        } else {
            if (c_[k] == -1) {
                os << "-";
            } else if (c_[k] != 1) {
                os << c_[k].get_str() << "*";
            }
            os << "X";
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

IntPoly derivative(const IntPoly& f) {
    if (f.degree() <= 0) return {};
    std::vector<mpz_class> d(static_cast<std::size_t>(f.degree()));
    for (std::size_t k = 1; k < f.coeffs().size(); ++k) d[k - 1] = f[k] * static_cast<unsigned long>(k);
    return IntPoly(std::move(d));
}

mpz_class content(const IntPoly& f) {
    mpz_class g = 0;
    for (const auto& v : f.coeffs()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

IntPoly primitive_part(const IntPoly& f) {
    if (f.is_zero()) return f;
    mpz_class g = content(f);
    if (f.leading() < 0) g = -g;
    std::vector<mpz_class> c(f.coeffs());
    for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(c));
}

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a[i] * b[j];
    }
    return IntPoly(std::move(c));
}

std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("exact_divide: division by zero polynomial");
    if (a.is_zero()) return IntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<mpz_class> rem(a.coeffs());
    const auto db = static_cast<std::size_t>(b.degree());
    const std::size_t dq = static_cast<std::size_t>(a.degree()) - db;
    std::vector<mpz_class> q(dq + 1);
    for (std::size_t k = dq + 1; k-- > 0;) {
        mpz_class& top = rem[k + db];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) return std::nullopt;
        mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
        for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q[k] * b[j];
    }
    for (std::size_t k = 0; k < db; ++k) {
        if (rem[k] != 0) return std::nullopt;
    }
    return IntPoly(std::move(q));
}

IntPoly remainder_monic(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero() || b.leading() != 1) throw std::invalid_argument("remainder_monic: divisor must be monic");
    if (a.degree() < b.degree()) return a;
    std::vector<mpz_class> rem(a.coeffs());
    const auto db = static_cast<std::size_t>(b.degree());
    for (std::size_t k = static_cast<std::size_t>(a.degree()) + 1; k-- > db;) {
        mpz_class top = rem[k];
        if (top == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= top * b[j];
    }
    rem.resize(db);
    return IntPoly(std::move(rem));
}

namespace {

// lc(b)^(deg a - deg b + 1) * a mod b.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> rem(a.coeffs());
    const auto db = static_cast<std::size_t>(b.degree());
    const mpz_class& lb = b.leading();
    for (long k = a.degree(); k >= static_cast<long>(db); --k) {
        const mpz_class top = rem[static_cast<std::size_t>(k)];
        for (auto& v : rem) v *= lb;
        const std::size_t off = static_cast<std::size_t>(k) - db;
        for (std::size_t j = 0; j <= db; ++j) rem[off + j] -= top * b[j];
    }
    rem.resize(db);
    return IntPoly(std::move(rem));
}

}  // namespace

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero()) return primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    IntPoly u = primitive_part(a), v = primitive_part(b);
    if (u.degree() < v.degree()) std::swap(u, v);
    while (!v.is_zero()) {
        if (v.degree() == 0) return IntPoly({mpz_class(1)});
        IntPoly r = pseudo_remainder(u, v);
        u = std::move(v);
        v = primitive_part(r);
    }
    return primitive_part(u);
}

IntPoly squarefree_part(const IntPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("squarefree_part: zero polynomial");
    IntPoly g = gcd(f, derivative(f));
    auto q = exact_divide(primitive_part(f), g);
    if (!q) throw std::logic_error("squarefree_part: gcd does not divide");
    return primitive_part(*q);
}

std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("squarefree_decomposition: zero polynomial");
    // chain[i] = gcd(chain[i-1], chain[i-1]'); chain[i-1]/chain[i] collects roots of multiplicity >= i.
    std::vector<IntPoly> chain{primitive_part(f)};
    while (chain.back().degree() > 0) chain.push_back(gcd(chain.back(), derivative(chain.back())));
    std::vector<IntPoly> at_least;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        auto q = exact_divide(chain[i - 1], chain[i]);
        if (!q) throw std::logic_error("squarefree_decomposition: chain division failed");
        at_least.push_back(primitive_part(*q));
    }
    std::vector<std::pair<IntPoly, int>> out;
    for (std::size_t i = 0; i < at_least.size(); ++i) {
        IntPoly exact = at_least[i];
        if (i + 1 < at_least.size()) {
            auto q = exact_divide(at_least[i], at_least[i + 1]);
            if (!q) throw std::logic_error("squarefree_decomposition: multiplicity split failed");
            exact = primitive_part(*q);
        }
        if (exact.degree() > 0) out.emplace_back(std::move(exact), static_cast<int>(i + 1));
    }
    return out;
}

namespace {

int moebius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t q : prime_factors(n)) {
        if ((n / q) % q == 0) return 0;
        mu = -mu;
    }
    return mu;
}

}  // namespace

IntPoly cyclotomic(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("cyclotomic: order must be >= 1");
    if (n == 1) return IntPoly({mpz_class(-1), mpz_class(1)});
    // prod_{d | n} (1 - X^d)^{mu(n/d)} as a power series truncated past degree phi(n).
    const auto deg = static_cast<std::size_t>(euler_phi(n));
    std::vector<mpz_class> s(deg + 1, 0);
    s[0] = 1;
    for (std::uint64_t d : divisors(n)) {
        if (d > deg) break;
        const int mu = moebius(n / d);
        if (mu == 1) {
            for (std::size_t k = deg; k >= d; --k) s[k] -= s[k - d];
        } else if (mu == -1) {
            for (std::size_t k = d; k <= deg; ++k) s[k] += s[k - d];
        }
    }
    return IntPoly(std::move(s));
}

}  // namespace gpnorm
