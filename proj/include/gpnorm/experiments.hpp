#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpnorm/lacunary.hpp"

namespace gpnorm {

using u64 = std::uint64_t;
using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// Rows are kept as formatted strings so that CSV output is byte-stable.
struct ExperimentReport {
    std::string id;
    Json parameters = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    Json summary = Json::object();
    u64 seed = 0;
    std::string version = kVersion;

    std::string to_csv() const;
    Json to_json() const;
    /// Index of a column, throws std::out_of_range when absent.
    std::size_t column(const std::string& name) const;
};

/// %.17g, or "inf"/"-inf"/"nan".
std::string format_double(double x);

/// Least-squares slope of log y against log x over pairs with x, y > 0; NaN with fewer than 2.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

struct ConvergenceOptions {
    u64 f = 3;
    u64 p_min = 3;
    u64 p_max = 1000;
    u64 budget = 1u << 20;
    u64 seed = 0;
    u64 exact_limit = 2000;     // exact CRT norm and float cross-check for p up to this bound
    u64 identity_limit = 61;    // counting-identity self-check for p up to this bound
    bool legacy = false;        // admit f = 2
};
ExperimentReport run_convergence(const ConvergenceOptions& opt);

ExperimentReport run_unit_census(u64 f, u64 p_max);

struct SumsOptions {
    std::optional<u64> f;                // period mode: a = period_exponents(p, f).a
    std::optional<ExponentVector> a;     // fixed-vector mode
    u64 p_min = 3;
    u64 p_max = 1000;
    std::vector<double> lambdas{1.0};
    double c = 1.0;
};
ExperimentReport run_small_sums_census(const SumsOptions& opt);

/// #{t in [1, p-1] : |P_a(zeta^t)| < threshold}, vectorized over t.
u64 small_sum_count_vectorized(const ExponentVector& a, u64 p, double threshold);
/// Same count, one t at a time.
u64 small_sum_count_scalar(const ExponentVector& a, u64 p, double threshold);
/// True iff P_a(zeta_p) = 0 exactly: the exponent multiset is uniform modulo p.
bool sum_vanishes(const ExponentVector& a, u64 p);

ExperimentReport run_lawton_rate(const MultiPoly& p, const std::vector<u64>& qs, u64 budget, u64 seed);
ExperimentReport run_sublevel(const MultiPoly& p, const std::vector<double>& ys, u64 budget, u64 seed);

}  // namespace gpnorm
