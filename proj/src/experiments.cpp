#include "gpnorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gpnorm/arith.hpp"
#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/lattice.hpp"
#include "gpnorm/mahler.hpp"
#include "gpnorm/parallel.hpp"

namespace gpnorm {

namespace {

std::string join(std::span<const i64> v, char sep = ';') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

// Primes p in [lo, hi] with p = 1 (mod f); for f = 2 this is every odd prime.
std::vector<u64> primes_one_mod(u64 f, u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 p : primes_congruent_one(f, hi)) {
        if (p >= std::max<u64>(lo, 3)) out.push_back(p);
    }
    return out;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string lambda_column(double lambda) { return "count_lambda_" + format_double(lambda); }

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx == 0 ? std::numeric_limits<double>::quiet_NaN() : sxy / sxx;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

Json ExperimentReport::to_json() const {
    Json j;
    j["experiment"] = id;
    j["version"] = version;
    j["seed"] = seed;
    j["parameters"] = parameters;
    j["columns"] = columns;
    j["row_count"] = rows.size();
    j["summary"] = summary;
    return j;
}

std::size_t ExperimentReport::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

ExperimentReport run_convergence(const ConvergenceOptions& opt) {
    if (opt.f < 2 || (!opt.legacy && (opt.f < 3 || opt.f % 2 == 0))) {
        throw InputError("convergence: f must be odd and >= 3 (f = 2 only in legacy mode), got " + std::to_string(opt.f));
    }
    const auto primes = primes_one_mod(opt.f, opt.p_min, opt.p_max);
    if (primes.empty()) throw InputError("convergence: no prime p = 1 mod " + std::to_string(opt.f) + " in range");

    const Subgroup omega = gaussian_omega_any(opt.f);
    const MahlerEstimate target = mahler_subgroup(omega, opt.budget, opt.seed);

    ExperimentReport rep;
    rep.id = "convergence";
    rep.seed = opt.seed;
    rep.parameters = {{"f", opt.f},           {"p_min", opt.p_min},
                      {"p_max", opt.p_max},   {"budget", opt.budget},
                      {"exact_limit", opt.exact_limit}, {"identity_limit", opt.identity_limit},
                      {"legacy", opt.legacy}};
    rep.columns = {"p", "u", "a", "delta_digits", "mean", "mean_source", "float_gap", "target", "error", "rho_p",
                   "identity", "status"};

    struct Row {
        std::vector<std::string> cells;
        double error = std::numeric_limits<double>::quiet_NaN();
        double gap = std::numeric_limits<double>::quiet_NaN();
        int identity = -1;  // -1 not checked, 0 failed, 1 held
        bool zero = false;
    };
    std::vector<Row> rows(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        const u64 p = primes[i];
        const auto pe = period_exponents(p, opt.f);
        Row& r = rows[i];
        std::string digits, source = "float", status = "ok", identity;
        double mean = std::numeric_limits<double>::quiet_NaN();
        double exact_mean = std::numeric_limits<double>::quiet_NaN();
        if (p <= opt.exact_limit) {
            const mpz_class d = delta_abs_exact(pe.a, p);
            if (d == 0) {
                r.zero = true;
            } else {
                digits = std::to_string(d.get_str().size());
                exact_mean = log_mpz(d) / static_cast<double>(p - 1);
            }
        }
        if (!r.zero) {
            try {
                const double fm = log_mean(pe.a, p);
                mean = fm;
                if (!std::isnan(exact_mean)) {
                    r.gap = std::abs(fm - exact_mean);
                    mean = exact_mean;
                    source = "exact";
                }
            } catch (const DeltaZero&) {
                r.zero = true;
            }
        }
        if (r.zero) {
            status = "delta_zero";
            mean = -std::numeric_limits<double>::infinity();
        } else {
            r.error = std::abs(mean - target.value);
        }
        if (p <= opt.identity_limit) {
            const auto reps = coset_representatives(p, opt.f);
            const mpz_class count = myerson_partition_count(p, opt.f, reps);
            const CosetProduct cp = delta_signed_cosets(p, opt.f);
            mpz_class fk;
            mpz_ui_pow_ui(fk.get_mpz_t(), opt.f, cp.k);
            r.identity = (mpz_class(static_cast<unsigned long>(p)) * count == fk + mpz_class(static_cast<unsigned long>(p - 1)) * cp.delta_signed) ? 1 : 0;
            identity = std::to_string(r.identity);
        }
        const i64 rp = rho_p(pe.a, omega, p);
        r.cells = {std::to_string(p),
                   std::to_string(pe.u),
                   join(pe.a.entries()),
                   digits,
                   format_double(mean),
                   source,
                   std::isnan(r.gap) ? "" : format_double(r.gap),
                   format_double(target.value),
                   format_double(r.error),
                   std::to_string(rp),
                   identity,
                   status};
    });

    std::vector<double> ps, errs;
    int checks = 0, failures = 0, zeros = 0;
    double max_gap = 0, max_err = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rep.rows.push_back(rows[i].cells);
        if (rows[i].identity >= 0) {
            ++checks;
            failures += rows[i].identity == 0;
        }
        zeros += rows[i].zero;
        if (!std::isnan(rows[i].gap)) max_gap = std::max(max_gap, rows[i].gap);
        if (!std::isnan(rows[i].error)) {
            ps.push_back(static_cast<double>(primes[i]));
            errs.push_back(rows[i].error);
            max_err = std::max(max_err, rows[i].error);
        }
    }
    const double fm1 = static_cast<double>(opt.f - 1);
    rep.summary = {{"rows", rows.size()},
                   {"target", target.value},
                   {"target_error_bound", target.error_bound},
                   {"target_method", to_string(target.method)},
                   {"omega_rank", omega.rank()},
                   {"median_error", finite_or_null(median(errs))},
                   {"max_error", max_err},
                   {"fitted_rate", finite_or_null(loglog_slope(ps, errs))},
                   {"reference_exponent_prime", -1.0 / (5.0 * fm1 * fm1)},
                   {"reference_exponent_general", -1.0 / (4.0 * fm1 * static_cast<double>(euler_phi(opt.f)))},
                   {"identity_checks", checks},
                   {"identity_failures", failures},
                   {"delta_zero_rows", zeros},
                   {"max_float_gap", max_gap}};
    return rep;
}

ExperimentReport run_unit_census(u64 f, u64 p_max) {
    if (f < 2) throw InputError("units: f must be >= 2");
    const auto primes = primes_one_mod(f, 3, p_max);
    ExperimentReport rep;
    rep.id = "units";
    rep.parameters = {{"f", f}, {"p_max", p_max}};
    rep.columns = {"p", "delta_abs", "coset_delta", "is_unit"};
    std::vector<std::vector<std::string>> rows(primes.size());
    std::vector<int> unit(primes.size(), 0);
    parallel_for(primes.size(), [&](std::size_t i) {
        const u64 p = primes[i];
        const auto pe = period_exponents(p, f);
        const mpz_class d = delta_abs_exact(pe.a, p);
        const CosetProduct cp = delta_signed_cosets(p, f);
        unit[i] = d == 1;
        rows[i] = {std::to_string(p), d.get_str(), cp.delta_signed.get_str(), std::to_string(unit[i])};
    });
    Json unit_primes = Json::array();
    int count = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        rep.rows.push_back(rows[i]);
        if (unit[i]) {
            ++count;
            unit_primes.push_back(primes[i]);
        }
    }
    rep.summary = {{"rows", primes.size()}, {"unit_count", count}, {"unit_primes", unit_primes}};
    return rep;
}

bool sum_vanishes(const ExponentVector& a, u64 p) {
    // 1 + sum zeta^{a_j} = sum_e c_e zeta^e vanishes iff all c_e are equal.
    std::vector<u64> counts(p, 0);
    counts[0] = 1;
    for (i64 v : a.entries()) ++counts[static_cast<std::size_t>(floor_mod(v, static_cast<i64>(p)))];
    return std::all_of(counts.begin(), counts.end(), [&](u64 c) { return c == counts[0]; });
}

u64 small_sum_count_vectorized(const ExponentVector& a, u64 p, double threshold) {
    const auto pi = static_cast<i64>(p);
    std::vector<double> ct(p), st(p);
    for (i64 e = 0; e < pi; ++e) {
        const auto z = unit_root(e, pi);
        ct[static_cast<std::size_t>(e)] = z.real();
        st[static_cast<std::size_t>(e)] = z.imag();
    }
    std::vector<double> re(p - 1, 1.0), im(p - 1, 0.0);
    for (i64 v : a.entries()) {
        const auto step = static_cast<u64>(floor_mod(v, pi));
        u64 cur = 0;
        for (u64 t = 0; t + 1 < p; ++t) {
            cur += step;
            if (cur >= p) cur -= p;
            re[t] += ct[cur];
            im[t] += st[cur];
        }
    }
    u64 count = 0;
    for (u64 t = 0; t + 1 < p; ++t) count += std::hypot(re[t], im[t]) < threshold;
    return count;
}

u64 small_sum_count_scalar(const ExponentVector& a, u64 p, double threshold) {
    const auto pi = static_cast<i64>(p);
    u64 count = 0;
    for (u64 t = 1; t < p; ++t) {
        double re = 1.0, im = 0.0;
        for (i64 v : a.entries()) {
            const u64 e = mul_mod(t, static_cast<u64>(floor_mod(v, pi)), p);
            const auto z = unit_root(static_cast<i64>(e), pi);
            re += z.real();
            im += z.imag();
        }
        count += std::hypot(re, im) < threshold;
    }
    return count;
}

ExperimentReport run_small_sums_census(const SumsOptions& opt) {
    if (opt.f.has_value() == opt.a.has_value()) throw InputError("sums: give exactly one of f or a");
    if (opt.lambdas.empty()) throw InputError("sums: empty lambda grid");
    for (double l : opt.lambdas) {
        if (!(l >= 1)) throw InputError("sums: lambda must be >= 1");
    }
    if (!(opt.c >= 1)) throw InputError("sums: c must be >= 1");
    std::vector<u64> primes;
    if (opt.f) {
        if (*opt.f < 2) throw InputError("sums: f must be >= 2");
        primes = primes_one_mod(*opt.f, opt.p_min, opt.p_max);
    } else {
        for (u64 p : primes_up_to(opt.p_max)) {
            if (p >= std::max<u64>(opt.p_min, 3)) primes.push_back(p);
        }
    }
    ExperimentReport rep;
    rep.id = "sums";
    rep.parameters = {{"mode", opt.f ? "period" : "vector"},
                      {"p_min", opt.p_min},
                      {"p_max", opt.p_max},
                      {"lambdas", opt.lambdas},
                      {"c", opt.c}};
    if (opt.f) rep.parameters["f"] = *opt.f;
    if (opt.a) rep.parameters["a"] = std::vector<i64>(opt.a->entries().begin(), opt.a->entries().end());
    rep.columns = {"p", "a", "skipped"};
    for (double l : opt.lambdas) rep.columns.push_back(lambda_column(l));
    rep.columns.push_back("scalar_match");

    const std::size_t nl = opt.lambdas.size();
    std::vector<std::vector<std::string>> rows(primes.size());
    std::vector<std::vector<u64>> counts(primes.size(), std::vector<u64>(nl, 0));
    std::vector<int> skipped(primes.size(), 0), match(primes.size(), 1);
    parallel_for(primes.size(), [&](std::size_t i) {
        const u64 p = primes[i];
        const ExponentVector a = opt.f ? period_exponents(p, *opt.f).a : *opt.a;
        auto& row = rows[i];
        row = {std::to_string(p), join(a.entries())};
        if (sum_vanishes(a, p)) {
            skipped[i] = 1;
            row.push_back("1");
            for (std::size_t l = 0; l < nl; ++l) row.push_back("");
            row.push_back("");
            return;
        }
        row.push_back("0");
        for (std::size_t l = 0; l < nl; ++l) {
            const double thr = std::pow(static_cast<double>(p), -opt.lambdas[l]) / opt.c;
            const u64 v = small_sum_count_vectorized(a, p, thr);
            const u64 s = small_sum_count_scalar(a, p, thr);
            counts[i][l] = v;
            if (v != s) match[i] = 0;
            row.push_back(std::to_string(v));
        }
        row.push_back(std::to_string(match[i]));
    });
    bool all_match = true;
    Json skipped_primes = Json::array();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        rep.rows.push_back(rows[i]);
        if (skipped[i]) {
            skipped_primes.push_back(primes[i]);
        } else {
            all_match = all_match && match[i];
        }
    }
    Json growth = Json::object();
    Json totals = Json::object();
    for (std::size_t l = 0; l < nl; ++l) {
        std::vector<double> x, y;
        u64 total = 0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (skipped[i]) continue;
            total += counts[i][l];
            x.push_back(static_cast<double>(primes[i]));
            y.push_back(static_cast<double>(counts[i][l]));
        }
        growth[format_double(opt.lambdas[l])] = finite_or_null(loglog_slope(x, y));
        totals[format_double(opt.lambdas[l])] = total;
    }
    rep.summary = {{"rows", primes.size()},
                   {"all_scalar_match", all_match},
                   {"skipped_primes", skipped_primes},
                   {"total_counts", totals},
                   {"growth_exponent", growth}};
    return rep;
}

ExperimentReport run_lawton_rate(const MultiPoly& p, const std::vector<u64>& qs, u64 budget, u64 seed) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (p.term_count() < 2) throw InputError("lawton: polynomial must be nonconstant with at least 2 terms");
    if (qs.empty()) throw InputError("lawton: empty q list");
    for (std::size_t i = 1; i < qs.size(); ++i) {
        if (qs[i] <= qs[i - 1]) throw InputError("lawton: q list must be increasing");
    }
    const std::size_t n = p.nvars();
    const MahlerEstimate multi = n == 1 ? mahler_univariate(p) : mahler_multivariate(p, budget, seed);
    ExperimentReport rep;
    rep.id = "lawton";
    rep.seed = seed;
    rep.parameters = {{"poly", poly_to_string(p)}, {"q", qs}, {"budget", budget}};
    rep.columns = {"q", "a", "rho", "univariate", "multivariate", "error", "error_bound"};
    std::vector<double> rhos, errs;
    for (u64 q : qs) {
        std::vector<i64> a(n);
        i64 x = 1;
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = x;
            if (j + 1 < n) x = checked_mul(x, static_cast<i64>(q));
        }
        if (n == 1) a[0] = static_cast<i64>(q);
        const ExponentVector av(a);
        const auto r = rho(av, Subgroup::full(n));
        const MultiPoly sub = p.substitute(av.entries());
        if (sub.is_zero()) throw ZeroPolynomial();
        const double uni = mahler_univariate(sub).value;
        const double err = uni - multi.value;
        rep.rows.push_back({std::to_string(q), join(av.entries()), r ? std::to_string(*r) : "inf", format_double(uni),
                            format_double(multi.value), format_double(err), format_double(multi.error_bound)});
        if (r) {
            rhos.push_back(static_cast<double>(*r));
            errs.push_back(std::abs(err));
        }
    }
    const double k = static_cast<double>(p.term_count());
    rep.summary = {{"rows", qs.size()},
                   {"multivariate", multi.value},
                   {"multivariate_error_bound", multi.error_bound},
                   {"fitted_decay", finite_or_null(loglog_slope(rhos, errs))},
                   {"reference_exponent", -1.0 / (4.0 * (k - 1.0))}};
    return rep;
}

ExperimentReport run_sublevel(const MultiPoly& p, const std::vector<double>& ys, u64 budget, u64 seed) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (ys.empty()) throw InputError("sublevel: empty y list");
    std::vector<double> sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    ExperimentReport rep;
    rep.id = "sublevel";
    rep.seed = seed;
    rep.parameters = {{"poly", poly_to_string(p)}, {"y", ys}, {"budget", budget}};
    rep.columns = {"y", "volume", "half_width", "samples"};
    std::vector<double> vols;
    for (double y : sorted) {
        const auto s = sublevel_volume(p, y, budget, seed);
        vols.push_back(s.volume);
        rep.rows.push_back({format_double(y), format_double(s.volume), format_double(s.half_width), std::to_string(s.samples)});
    }
    const double k = static_cast<double>(p.term_count());
    const double exponent = 1.0 / (2.0 * std::max(1.0, k - 1.0));
    bool monotone = true;
    for (std::size_t i = 1; i < vols.size(); ++i) monotone = monotone && vols[i - 1] <= vols[i];
    // C fitted at the largest y
    const double c = vols.back() / std::pow(sorted.back(), exponent);
    bool consistent = true;
    for (std::size_t i = 0; i < vols.size(); ++i) consistent = consistent && vols[i] <= c * std::pow(sorted[i], exponent);
    rep.summary = {{"rows", vols.size()},
                   {"fitted_slope", finite_or_null(loglog_slope(sorted, vols))},
                   {"upper_bound_exponent", exponent},
                   {"monotone", monotone},
                   {"fitted_constant", c},
                   {"consistent_with_bound", consistent}};
    return rep;
}

}  // namespace gpnorm
