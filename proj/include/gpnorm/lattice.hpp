#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpnorm/lacunary.hpp"

namespace gpnorm {

using u64 = std::uint64_t;

/// Subgroup of Z^n stored by its Hermite basis: echelon rows, positive pivots, entries above each
/// pivot reduced into [0, pivot). Two subgroups are equal iff their bases are equal.
class Subgroup {
public:
    static Subgroup from_generators(std::size_t n, const std::vector<std::vector<i64>>& generators);
    static Subgroup full(std::size_t n);
    static Subgroup zero(std::size_t n);

    std::size_t ambient() const noexcept { return n_; }
    std::size_t rank() const noexcept { return rows_.size(); }
    const std::vector<std::vector<i64>>& rows() const noexcept { return rows_; }
    ExponentMatrix basis() const;

    /// nu with v = sum_i nu_i rows()[i], or nullopt when v is not in the subgroup.
    std::optional<std::vector<i64>> coordinates(std::span<const i64> v) const;
    bool contains(std::span<const i64> v) const { return coordinates(v).has_value(); }

    friend bool operator==(const Subgroup&, const Subgroup&) = default;

private:
    Subgroup(std::size_t n, std::vector<std::vector<i64>> rows) : n_(n), rows_(std::move(rows)) {}
    std::size_t n_;
    std::vector<std::vector<i64>> rows_;
};

/// Hermite basis of the row span; zero rows dropped.
std::vector<std::vector<i64>> hermite_normal_form(const std::vector<std::vector<i64>>& rows, std::size_t n);

/// {x in Z^n : M x = 0} for the r x n matrix M given by rows; always primitive.
Subgroup integer_kernel(const std::vector<std::vector<i64>>& rows, std::size_t n);

/// {a in Z^n : <a, w> = 0 for all w in lambda}.
Subgroup perp(const Subgroup& lambda);

/// min over nonzero lattice vectors of the sup-norm, for the lattice spanned by the (linearly
/// independent) rows. Throws EnumerationLimit after node_limit enumeration nodes.
struct ShortVector {
    i64 norm;
    std::vector<i64> vector;
};
ShortVector shortest_sup_vector(const std::vector<std::vector<i64>>& rows, std::size_t n,
                                u64 node_limit = 200'000'000);

/// min{|w| : w in omega \ {0}, <w, a> = 0} in sup-norm; nullopt when no such w exists.
std::optional<i64> rho(const ExponentVector& a, const Subgroup& omega);
/// min{|w| : w in omega \ {0}, <w, a> = 0 mod p} in sup-norm.
i64 rho_p(const ExponentVector& a, const Subgroup& omega, u64 p);

/// A violation of the rank-2 hypothesis: every basis row of omega is orthogonal to
/// v = alpha (e_i - e_j) + beta (e_k - e_l), with e_0 = 0.
struct HypothesisWitness {
    std::size_t i, j, k, l;
    i64 alpha, beta;
    std::vector<i64> v(std::size_t n) const;
};
struct HypothesisResult {
    bool holds;
    std::optional<HypothesisWitness> witness;
};
HypothesisResult hypothesis_check(const Subgroup& omega);

struct ReductionResult {
    u64 t;
    std::vector<i64> omega;  // element of the subgroup with a' = t a - p omega
    ExponentVector a_prime;
    double quality;          // max_i dist(t nu_i / p, Z)
    bool outside_regime;     // a lies in p * Omega; a' is p times a shortest basis row
};
ReductionResult dirichlet_reduce(const ExponentVector& a, const Subgroup& omega, u64 p);

/// Omega = perp(Lambda) with Lambda = {b in Z^{f-1} : sum_i b_i (xi^i - 1) = 0}, xi of order f.
Subgroup gaussian_omega(u64 f);
/// Same construction without the odd-order restriction; f = 2 gives Z^1.
Subgroup gaussian_omega_any(u64 f);

struct PeriodExponents {
    u64 u;
    ExponentVector a;  // a_i = u^i - 1 mod p, i = 1..f-1
};
PeriodExponents period_exponents(u64 p, u64 f);

}  // namespace gpnorm
