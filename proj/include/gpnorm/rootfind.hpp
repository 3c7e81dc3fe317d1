#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "gpnorm/intpoly.hpp"
#include "gpnorm/lacunary.hpp"

namespace gpnorm {

using u64 = std::uint64_t;

enum class CircleTag { Inside, Outside, RootOfUnity, OnCircleOther };

struct CircleClass {
    CircleTag tag = CircleTag::Inside;
    u64 order = 0;  // N for RootOfUnity
    u64 index = 0;  // k with alpha = e(k/N), gcd(k, N) = 1
    bool certified = true;

    friend bool operator==(const CircleClass&, const CircleClass&) = default;
};

const char* to_string(CircleTag tag);

struct Root {
    std::complex<double> value;
    int multiplicity = 1;
    double radius = 0.0;     // certified inclusion radius around the working-precision center
    double log_abs = 0.0;    // log|alpha| evaluated at working precision
    double arg_turns = 0.0;  // arg(alpha) / 2pi in [0, 1)
    CircleClass circle;
    std::size_t factor = 0;  // index into RootSet::factors
};

struct RootSet {
    std::vector<Root> roots;
    mpz_class leading;   // p_0
    std::size_t degree = 0;
    std::size_t term_count = 0;
    IntPoly squarefree;  // F_sf
    std::vector<std::pair<IntPoly, int>> factors;
    int precision_bits = 53;

    std::size_t multiplicity_total() const;
};

/// Starting rung of the precision ladder (53, 106 or 212 bits); 53 unless changed.
int default_precision_bits();
void set_default_precision_bits(int bits);

/// exp(-1) (2D)^{-(D+1)} ||F_sf||_2^{-2(2D-1)} with D = deg F_sf: a lower bound for ||alpha| - 1|
/// over roots alpha of F_sf off the unit circle.
double circle_separation_floor(const IntPoly& f_sf);

/// All roots with multiplicity, classified against the unit circle. Works on each squarefree
/// factor, climbing 53 -> 106 -> 212 bits while iteration fails, inclusion disks overlap or a
/// classification is indeterminate. Throws NonConvergence at the top of the ladder.
/// min_precision_bits = 0 starts at default_precision_bits().
RootSet find_roots(const IntPoly& f, int min_precision_bits = 0);
RootSet find_roots(std::span<const i64> dense);

/// Classification from the stored double data of a root of f_sf. Throws Indeterminate when an
/// on-circle candidate is not a root of unity and top_precision is false.
CircleClass classify_root(const Root& alpha, const IntPoly& f_sf, bool top_precision = true);

struct LogPolar {
    double log_abs;
    double arg_turns;
};

/// log|alpha^p - 1| from (log|alpha|, arg alpha) without forming alpha^p. rel_err is the relative
/// uncertainty of alpha; throws PoleAtOne when |alpha^p - 1| is within p * (rel_err + 4u) of zero.
double log_pow_distance(LogPolar alpha, u64 p, double rel_err = 0.0);
/// Same, exact for classified roots of unity: PoleAtOne iff N | p.
double log_pow_distance(const Root& alpha, u64 p);

/// Indices into R.roots of the roots excessively close to the unit circle after raising to the
/// power p: |alpha| < 1 and |alpha^p - 1| < p^{-lambda}, or |alpha| > 1 and |alpha^{-p} - 1| <
/// p^{-lambda}. Roots on the circle never qualify.
struct BSet {
    std::vector<std::size_t> indices;
    std::size_t count = 0;  // with multiplicity
};
BSet bset(const RootSet& r, u64 p, double lambda);
BSet bset(const ExponentVector& a, u64 p, double lambda);

/// p log p_0 - log(n+1) + sum_i log|alpha_i^p - 1|, i.e. log Delta_p(a) from the roots of
/// normalize(a). Throws PoleAtOne when some alpha_i^p = 1.
double delta_from_roots(const ExponentVector& a, u64 p, const RootSet& r);

/// Arc [start, start + length) in turns, wrapping modulo 1.
struct Arc {
    double start_turns;
    double length_turns;
};
struct SectorCount {
    std::size_t count = 0;  // roots with multiplicity whose argument lies in the arc
    double bound = 0.0;     // length * d + number of terms of the polynomial
    bool within_bound() const { return static_cast<double>(count) <= bound; }
};
SectorCount sector_count(const RootSet& r, Arc arc);

struct ResidualRow {
    std::size_t index;
    std::complex<double> value;
    int multiplicity;
    CircleClass circle;
    double residual;  // |log|alpha^p - 1| - p log max{1, |alpha|}|
    bool in_bset;
};
struct ResidualTable {
    std::vector<ResidualRow> rows;
    double log_mean;   // (1/(p-1)) log Delta_p(a), exact
    double mahler;     // m(P_a) from the same roots
    double aggregate;  // |log_mean - mahler|
};
ResidualTable residual_decomposition(const ExponentVector& a, u64 p, double lambda);

/// m(F) = log|lead| + sum log max{1, |alpha|}, from a root set.
double mahler_from_roots(const RootSet& r);

/// Roots of a complex-coefficient polynomial c[0] + c[1] X + ... in double precision, without
/// certification. c.back() must be non-zero.
std::vector<std::complex<double>> solve_complex(std::span<const std::complex<double>> c);

}  // namespace gpnorm
