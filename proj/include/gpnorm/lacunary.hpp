#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gpnorm {

using i64 = std::int64_t;

/// Exponent vector a = (a_1, ..., a_n) of the lacunary polynomial 1 + X^{a_1} + ... + X^{a_n}.
/// The implicit a_0 = 0 is not stored.
class ExponentVector {
public:
    explicit ExponentVector(std::vector<i64> entries);
    ExponentVector(std::initializer_list<i64> entries) : ExponentVector(std::vector<i64>(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }
    i64 operator[](std::size_t i) const { return entries_[i]; }
    std::span<const i64> entries() const noexcept { return entries_; }

    /// max |a_i| over the stored entries.
    i64 sup_norm() const noexcept;
    bool is_zero() const noexcept;

    std::string to_string() const;

    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    std::vector<i64> entries_;
};

/// X^e * P_a as a dense integer polynomial, coefficient of X^k at dense[k].
struct LacunaryPoly {
    ExponentVector source;
    i64 shift = 0;
    std::vector<i64> dense;

    std::size_t degree() const noexcept { return dense.size() - 1; }
    i64 leading() const { return dense.back(); }
    /// Number of non-zero coefficients.
    std::size_t term_count() const noexcept;
};

/// m x n integer matrix, row-major.
class ExponentMatrix {
public:
    ExponentMatrix(std::size_t rows, std::size_t cols);
    ExponentMatrix(std::size_t rows, std::size_t cols, std::vector<i64> data);
    static ExponentMatrix from_rows(const std::vector<std::vector<i64>>& rows);
    static ExponentMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    i64& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    i64 operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::vector<i64> row(std::size_t i) const;
    std::vector<i64> col(std::size_t j) const;

    friend bool operator==(const ExponentMatrix&, const ExponentMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<i64> data_;
};

/// Laurent polynomial in x1..xn with integer coefficients. Zero coefficients are never stored.
class MultiPoly {
public:
    using Exponent = std::vector<i64>;

    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

    /// P_A = 1 + sum_j X^{column j of A}, one variable per row of A.
    static MultiPoly from_matrix(const ExponentMatrix& a);
    /// Univariate Laurent polynomial with the given coefficients, coeffs[k] at X^{k + low}.
    static MultiPoly univariate(std::span<const i64> coeffs, i64 low = 0);

    void add_term(const Exponent& exponent, i64 coeff);

    std::size_t nvars() const noexcept { return nvars_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<Exponent, i64>& terms() const noexcept { return terms_; }

    i64 constant_term() const;
    /// Columns are the exponents of the non-constant monomials, in the same order as coefficients().
    ExponentMatrix exponent_matrix() const;
    std::vector<i64> coefficients() const;

    /// P(e(x_1), ..., e(x_n)) with e(t) = exp(2 pi i t).
    std::complex<double> evaluate_on_torus(std::span<const double> x) const;

    /// P(X^{a_1}, ..., X^{a_n}) as a univariate Laurent polynomial.
    MultiPoly substitute(std::span<const i64> a) const;

    std::string to_string() const;

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

private:
    std::size_t nvars_;
    std::map<Exponent, i64> terms_;
};

/// Shifts P_a to a polynomial with non-zero constant term; repeated exponents merge.
LacunaryPoly normalize(const ExponentVector& a);

/// 1 + sum_j e(a_j x), with exact reduction of a_j x modulo 1.
std::complex<double> evaluate_on_torus(const ExponentVector& a, double x);

/// exp(2 pi i r) for r given in turns; reduces to [-1/2, 1/2] first.
std::complex<double> unit_phase(double turns);
/// exp(2 pi i k / m) computed from the exact residue of k modulo m.
std::complex<double> unit_root(i64 k, i64 m);
/// a * x modulo 1 in [0, 1), exact up to the final rounding.
double frac_product(i64 a, double x);

/// a'_j = sum_i nu_i A_ij, so that P_{a'}(X) = P_A(X^{nu_1}, ..., X^{nu_m}).
ExponentVector compose(const ExponentMatrix& a, std::span<const i64> nu);

MultiPoly parse_poly(std::string_view text);
std::string poly_to_string(const MultiPoly& p);

}  // namespace gpnorm
