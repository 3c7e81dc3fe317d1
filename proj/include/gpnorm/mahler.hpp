#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpnorm/intpoly.hpp"
#include "gpnorm/lacunary.hpp"
#include "gpnorm/lattice.hpp"

namespace gpnorm {

using u64 = std::uint64_t;

enum class MahlerMethod { ExactJensen, NestedQuadrature };

const char* to_string(MahlerMethod m);

struct MahlerEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    MahlerMethod method = MahlerMethod::ExactJensen;
    u64 samples_used = 0;
};

/// log|p_0| + sum_i log max{1, |alpha_i|} over the roots.
MahlerEstimate mahler_univariate(const IntPoly& f);
/// Univariate Laurent polynomial (any single variable of p).
MahlerEstimate mahler_univariate(const MultiPoly& p);

/// Nested scheme: Jensen in one variable at every node of a randomized rank-1 lattice rule in the
/// remaining variables; 8 random shifts of budget / 8 points each, error bound 3 standard errors
/// of the shift means. Constants and monomials are exact; a polynomial in one variable goes to
/// mahler_univariate. Throws BudgetTooSmall for budget < 512.
MahlerEstimate mahler_multivariate(const MultiPoly& p, u64 budget = 1u << 20, u64 seed = 0);

/// m(P_A) for the Hermite basis A of omega.
MahlerEstimate mahler_subgroup(const Subgroup& omega, u64 budget = 1u << 20, u64 seed = 0);
/// m(P_A) for an explicit basis matrix (rows span the subgroup).
MahlerEstimate mahler_basis(const ExponentMatrix& a, u64 budget = 1u << 20, u64 seed = 0);

/// Rank-1 lattice generating vector for n points in s dimensions: z = (1) for s = 1, otherwise
/// the Korobov vector (1, g, g^2, ...) mod n with the smallest P_2 among a fixed candidate list.
std::vector<u64> lattice_rule_vector(u64 n, std::size_t s);

struct SublevelEstimate {
    double volume = 0.0;
    double half_width = 0.0;  // 3 sqrt(v (1 - v) / N)
    u64 samples = 0;
};

/// Monte Carlo estimate of vol{x in [0,1)^n : |P(e(x))| < y}. Uses the same sample points for a
/// given seed, so estimates are monotone in y.
SublevelEstimate sublevel_volume(const MultiPoly& p, double y, u64 budget, u64 seed = 0);

struct LawtonError {
    double univariate;         // m(P(X^{a_1}, ..., X^{a_n}))
    MahlerEstimate multivariate;
    double error;              // univariate - multivariate.value
    double error_bound;        // multivariate.error_bound
};
LawtonError lawton_error(const MultiPoly& p, const ExponentVector& a, u64 budget = 1u << 20, u64 seed = 0);

}  // namespace gpnorm
