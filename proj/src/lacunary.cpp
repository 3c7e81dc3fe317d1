#include "gpnorm/lacunary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gpnorm/arith.hpp"
#include "gpnorm/errors.hpp"

namespace gpnorm {

ExponentVector::ExponentVector(std::vector<i64> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InputError("exponent vector must have n >= 1 entries");
}

i64 ExponentVector::sup_norm() const noexcept {
    i64 m = 0;
    for (i64 v : entries_) m = std::max(m, v < 0 ? -v : v);
    return m;
}

bool ExponentVector::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](i64 v) { return v == 0; });
}

std::string ExponentVector::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
    return os.str();
}

std::size_t LacunaryPoly::term_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(dense.begin(), dense.end(), [](i64 c) { return c != 0; }));
}

ExponentMatrix::ExponentMatrix(std::size_t rows, std::size_t cols)
    : ExponentMatrix(rows, cols, std::vector<i64>(rows * cols, 0)) {}

ExponentMatrix::ExponentMatrix(std::size_t rows, std::size_t cols, std::vector<i64> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0) throw InputError("exponent matrix needs m >= 1 and n >= 1");
    if (data_.size() != rows_ * cols_) throw DimensionMismatch("exponent matrix data size mismatch");
}

ExponentMatrix ExponentMatrix::from_rows(const std::vector<std::vector<i64>>& rows) {
    if (rows.empty()) throw InputError("exponent matrix needs at least one row");
    std::vector<i64> data;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw DimensionMismatch("ragged exponent matrix");
        data.insert(data.end(), r.begin(), r.end());
    }
    return ExponentMatrix(rows.size(), rows.front().size(), std::move(data));
}

ExponentMatrix ExponentMatrix::identity(std::size_t n) {
    ExponentMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::vector<i64> ExponentMatrix::row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

std::vector<i64> ExponentMatrix::col(std::size_t j) const {
    std::vector<i64> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

LacunaryPoly normalize(const ExponentVector& a) {
    i64 shift = 0;
    i64 lo = 0, hi = 0;
    for (i64 v : a.entries()) {
        shift = std::max(shift, -v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const i64 degree = checked_add(hi, -lo);
    LacunaryPoly out{a, shift, std::vector<i64>(static_cast<std::size_t>(degree) + 1, 0)};
    out.dense[static_cast<std::size_t>(shift)] += 1;
    for (i64 v : a.entries()) out.dense[static_cast<std::size_t>(v + shift)] += 1;
    return out;
}

double frac_product(i64 a, double x) {
    if (a == 0 || x == 0.0) return 0.0;
    int k = 0;
    const double f = std::frexp(x, &k);
    // x = mant * 2^e exactly.
    const auto mant = static_cast<i64>(std::ldexp(f, 53));
    const int e = k - 53;
    double r;
    if (e >= 0) {
        r = 0.0;  // a * x is an integer
    } else if (-e <= 120) {
        __int128 prod = static_cast<__int128>(a) * mant;
        const int shift = -e;
        const __int128 modulus = static_cast<__int128>(1) << shift;
        __int128 rem = prod & (modulus - 1);  // two's complement gives the floor residue
        r = std::ldexp(static_cast<double>(static_cast<long double>(rem)), e);
    } else {
        r = static_cast<double>(static_cast<long double>(a) * x);
        r -= std::floor(r);
    }
    if (r >= 1.0) r -= 1.0;
    return r;
}

std::complex<double> unit_phase(double turns) {
    double r = turns - std::round(turns);
    const double angle = 2.0 * std::numbers::pi * r;
    return {std::cos(angle), std::sin(angle)};
}

std::complex<double> unit_root(i64 k, i64 m) {
    const i64 r = symmetric_mod(k, m);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
    return {std::cos(angle), std::sin(angle)};
}

std::complex<double> evaluate_on_torus(const ExponentVector& a, double x) {
    std::complex<double> sum(1.0, 0.0);
    for (i64 v : a.entries()) sum += unit_phase(frac_product(v, x));
    return sum;
}

ExponentVector compose(const ExponentMatrix& a, std::span<const i64> nu) {
    if (nu.size() != a.rows()) throw DimensionMismatch("compose: nu has length " + std::to_string(nu.size()) +
                                                       " but A has " + std::to_string(a.rows()) + " rows");
    std::vector<i64> out(a.cols(), 0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) out[j] = checked_add(out[j], checked_mul(nu[i], a(i, j)));
    }
    return ExponentVector(std::move(out));
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::from_matrix(const ExponentMatrix& a) {
    MultiPoly p(a.rows());
    p.add_term(Exponent(a.rows(), 0), 1);
    for (std::size_t j = 0; j < a.cols(); ++j) p.add_term(a.col(j), 1);
    return p;
}

MultiPoly MultiPoly::univariate(std::span<const i64> coeffs, i64 low) {
    MultiPoly p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<i64>(k) + low}, coeffs[k]);
    return p;
}

void MultiPoly::add_term(const Exponent& exponent, i64 coeff) {
    if (exponent.size() != nvars_) throw DimensionMismatch("monomial has wrong number of variables");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second = checked_add(it->second, coeff);
        if (it->second == 0) terms_.erase(it);
    }
}

i64 MultiPoly::constant_term() const {
    auto it = terms_.find(Exponent(nvars_, 0));
    return it == terms_.end() ? 0 : it->second;
}

ExponentMatrix MultiPoly::exponent_matrix() const {
    const Exponent zero(nvars_, 0);
    std::vector<i64> cols;
    std::size_t count = 0;
    for (const auto& [e, c] : terms_) {
        if (e == zero) continue;
        cols.insert(cols.end(), e.begin(), e.end());
        ++count;
    }
    if (count == 0) throw InputError("polynomial has no non-constant monomials");
    ExponentMatrix m(nvars_, count);
    for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t i = 0; i < nvars_; ++i) m(i, j) = cols[j * nvars_ + i];
    }
    return m;
}

std::vector<i64> MultiPoly::coefficients() const {
    const Exponent zero(nvars_, 0);
    std::vector<i64> out;
    for (const auto& [e, c] : terms_) {
        if (e != zero) out.push_back(c);
    }
    return out;
}

std::complex<double> MultiPoly::evaluate_on_torus(std::span<const double> x) const {
    if (x.size() != nvars_) throw DimensionMismatch("evaluate_on_torus: point has wrong dimension");
    std::complex<double> sum(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
        double turns = 0.0;
        for (std::size_t i = 0; i < nvars_; ++i) {
            turns += frac_product(e[i], x[i]);
        }
        sum += static_cast<double>(c) * unit_phase(turns);
    }
    return sum;
}

MultiPoly MultiPoly::substitute(std::span<const i64> a) const {
    if (a.size() != nvars_) throw DimensionMismatch("substitute: exponent vector has wrong length");
    MultiPoly out(1);
    for (const auto& [e, c] : terms_) {
        i64 k = 0;
        for (std::size_t i = 0; i < nvars_; ++i) k = checked_add(k, checked_mul(e[i], a[i]));
        out.add_term({k}, c);
    }
    return out;
}

namespace {

// Printing order: total |degree| first, then variables with lower index first.
bool print_before(const MultiPoly::Exponent& lhs, const MultiPoly::Exponent& rhs) {
    i64 dl = 0, dr = 0;
    for (i64 v : lhs) dl += v < 0 ? -v : v;
    for (i64 v : rhs) dr += v < 0 ? -v : v;
    if (dl != dr) return dl < dr;
    return lhs > rhs;
}

}  // namespace

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, i64>> ordered(terms_.begin(), terms_.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& l, const auto& r) { return print_before(l.first, r.first); });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : ordered) {
        const bool constant = std::all_of(e.begin(), e.end(), [](i64 v) { return v == 0; });
        i64 mag = c < 0 ? -c : c;
        if (c < 0) {
            os << "-";
        } else if (!first) {
            os << "+";
        }
        first = false;
        bool need_star = false;
        if (constant || mag != 1) {
            os << mag;
            need_star = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << "x" << (i + 1);
            if (e[i] != 1) os << "^" << e[i];
            need_star = true;
        }
    }
    return os.str();
}

std::string poly_to_string(const MultiPoly& p) { return p.to_string(); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    MultiPoly parse() {
        std::vector<std::pair<std::map<std::size_t, i64>, i64>> monomials;
        std::size_t max_var = 0;
        skip_ws();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        bool first = true;
        while (!at_end()) {
            i64 sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos_);
            }
            first = false;
            auto [factors, coeff] = parse_monomial();
            for (const auto& [var, exp] : factors) max_var = std::max(max_var, var);
            monomials.emplace_back(std::move(factors), checked_mul(sign, coeff));
            skip_ws();
        }
        MultiPoly p(std::max<std::size_t>(max_var, 1));
        for (const auto& [factors, coeff] : monomials) {
            MultiPoly::Exponent e(p.nvars(), 0);
            for (const auto& [var, exp] : factors) e[var - 1] = exp;
            p.add_term(e, coeff);
        }
        return p;
    }

private:
    std::pair<std::map<std::size_t, i64>, i64> parse_monomial() {
        std::map<std::size_t, i64> factors;
        i64 coeff = 1;
        bool expect_factor = true;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = parse_uint("coefficient");
            if (peek() == '.' || peek() == '/' || peek() == 'e' || peek() == 'E') {
                throw ParseError("unsupported coefficient (integers only)", pos_);
            }
            skip_ws();
            if (peek() != '*') return {factors, coeff};
            ++pos_;
            skip_ws();
        }
        while (expect_factor) {
            if (peek() != 'x') throw ParseError("expected variable x<k>", pos_);
            ++pos_;
            const std::size_t var_pos = pos_;
            const i64 var = parse_uint("variable index");
            if (var < 1) throw ParseError("variable index must be >= 1", var_pos);
            i64 exp = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                i64 esign = 1;
                if (peek() == '-' || peek() == '+') {
                    esign = peek() == '-' ? -1 : 1;
                    ++pos_;
                    skip_ws();
                }
                exp = esign * parse_uint("exponent");
            }
            i64& slot = factors[static_cast<std::size_t>(var)];
            slot = checked_add(slot, exp);
            skip_ws();
            expect_factor = peek() == '*';
            if (expect_factor) {
                ++pos_;
                skip_ws();
            }
        }
        return {factors, coeff};
    }

    i64 parse_uint(const char* what) {
        skip_ws();
        const std::size_t start = pos_;
        i64 value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = checked_add(checked_mul(value, 10), peek() - '0');
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
        return value;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

}  // namespace gpnorm
