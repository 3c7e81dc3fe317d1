#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gpnorm {

/// Dense univariate polynomial over Z, coefficient of X^k at index k, never with
/// trailing zero coefficients.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> coeffs);
    static IntPoly from_int64(std::span<const std::int64_t> coeffs);

    bool is_zero() const noexcept { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    const mpz_class& leading() const { return c_.back(); }
    const mpz_class& operator[](std::size_t k) const { return c_[k]; }
    const std::vector<mpz_class>& coeffs() const noexcept { return c_; }
    std::size_t term_count() const noexcept;

    std::vector<double> to_double() const;
    std::string to_string() const;

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void trim();
    std::vector<mpz_class> c_;
};

IntPoly derivative(const IntPoly& f);
mpz_class content(const IntPoly& f);
/// f / content(f) with positive leading coefficient.
IntPoly primitive_part(const IntPoly& f);
IntPoly multiply(const IntPoly& a, const IntPoly& b);

/// Quotient a / b when b divides a in Z[X]; nullopt otherwise.
std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b);
/// Remainder of a modulo a monic b.
IntPoly remainder_monic(const IntPoly& a, const IntPoly& b);

/// Primitive gcd with positive leading coefficient (primitive PRS).
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// F / gcd(F, F'), primitive.
IntPoly squarefree_part(const IntPoly& f);

/// Pairwise coprime squarefree primitive factors S_i with F = c * prod S_i^i, via the gcd chain
/// F, gcd(F, F'), ... Factors of degree 0 are omitted.
std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& f);

/// N-th cyclotomic polynomial.
IntPoly cyclotomic(std::uint64_t n);

}  // namespace gpnorm
