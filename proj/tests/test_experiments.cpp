#include "doctest.h"

#include <cmath>
#include <string>

#include "gpnorm/errors.hpp"
#include "gpnorm/experiments.hpp"
#include "gpnorm/parallel.hpp"
#include "oracles.hpp"

using namespace gpnorm;

namespace {

const std::vector<std::string>& row_for(const ExperimentReport& r, const std::string& key) {
    for (const auto& row : r.rows)
        if (row.front() == key) return row;
    throw std::out_of_range("no row " + key);
}

double cell(const ExperimentReport& r, const std::string& key, const std::string& col) {
    return std::stod(row_for(r, key)[r.column(col)]);
}

}  // namespace

TEST_CASE("format helpers") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(format_double(NAN) == "nan");
    CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
    CHECK(std::isnan(loglog_slope({1}, {1})));
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("convergence run for f = 3") {
    ConvergenceOptions opt;
    opt.f = 3;
    opt.p_max = 300;
    opt.budget = 1u << 16;
    const ExperimentReport r = run_convergence(opt);
    const double reference = oracle::smyth_constant();
    CHECK(cell(r, "7", "mean") == doctest::Approx(std::log(8.0) / 6).epsilon(1e-14));
    CHECK(cell(r, "7", "target") == doctest::Approx(reference).epsilon(1e-6));
    CHECK(cell(r, "7", "error") == doctest::Approx(0.0235).epsilon(1e-2));
    CHECK(row_for(r, "7")[r.column("identity")] == "1");
    CHECK(r.summary["identity_failures"] == 0);
    CHECK(r.summary["identity_checks"].get<int>() > 0);
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        CHECK(std::stoull(r.rows[i - 1][0]) < std::stoull(r.rows[i][0]));
    for (const auto& row : r.rows) CHECK((std::stoull(row[0]) - 1) % 3 == 0);
    CHECK(r.summary["reference_exponent_prime"].get<double>() == doctest::Approx(-1.0 / 20));
}

TEST_CASE("legacy f = 2 run has vanishing means") {
    ConvergenceOptions opt;
    opt.f = 2;
    opt.p_max = 200;
    opt.legacy = true;
    opt.budget = 4096;
    const ExperimentReport r = run_convergence(opt);
    for (const auto& row : r.rows) CHECK(std::stod(row[r.column("mean")]) == 0.0);
    opt.legacy = false;
    CHECK_THROWS_AS(run_convergence(opt), InputError);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    ConvergenceOptions opt;
    opt.f = 3;
    opt.p_max = 400;
    opt.budget = 1u << 14;
    opt.seed = 9;
    const std::size_t saved = thread_count();
    set_thread_count(1);
    const std::string a = run_convergence(opt).to_csv();
    const std::string aj = run_convergence(opt).to_json().dump();
    set_thread_count(3);
    const std::string b = run_convergence(opt).to_csv();
    const std::string bj = run_convergence(opt).to_json().dump();
    set_thread_count(saved);
    CHECK(a == b);
    CHECK(aj == bj);
}

TEST_CASE("unit census") {
    const ExperimentReport two = run_unit_census(2, 500);
    for (const auto& row : two.rows) CHECK(row[two.column("delta_abs")] == "1");
    const ExperimentReport four = run_unit_census(4, 500);
    for (const auto& row : four.rows) {
        CHECK(row[four.column("delta_abs")] == "1");
        const std::string c = row[four.column("coset_delta")];
        CHECK((c == "1" || c == "-1"));
    }
    CHECK(four.summary["unit_count"] == four.rows.size());
    const ExperimentReport three = run_unit_census(3, 500);
    std::size_t units = 0;
    for (const auto& row : three.rows) units += row[three.column("is_unit")] == "1";
    CHECK(three.summary["unit_count"] == units);
}

TEST_CASE("small sums census") {
    SumsOptions one;
    one.a = ExponentVector{1};
    one.p_min = 11;
    one.p_max = 400;
    const ExperimentReport r = run_small_sums_census(one);
    for (const auto& row : r.rows) CHECK(row[r.column("count_lambda_1")] == "0");
    CHECK(r.summary["all_scalar_match"] == true);

    SumsOptions seven;
    seven.f = 3;
    seven.p_min = 7;
    seven.p_max = 7;
    const ExperimentReport s = run_small_sums_census(seven);
    REQUIRE(s.rows.size() == 1);
    CHECK(s.rows[0][s.column("count_lambda_1")] == "0");

    SumsOptions vanish;
    vanish.a = ExponentVector{1, 2};
    vanish.p_min = 3;
    vanish.p_max = 3;
    const ExperimentReport v = run_small_sums_census(vanish);
    CHECK(v.rows[0][v.column("skipped")] == "1");
    CHECK(sum_vanishes(ExponentVector{1, 2}, 3));
    CHECK(sum_vanishes(ExponentVector{1, 2, 3, 4, 5, 6}, 7));
    CHECK_FALSE(sum_vanishes(ExponentVector{1, 3}, 7));

    SumsOptions bad;
    bad.f = 3;
    bad.lambdas = {0.5};
    CHECK_THROWS_AS(run_small_sums_census(bad), InputError);
}

TEST_CASE("vectorized and scalar small-sum counts agree") {
    for (std::uint64_t p : {101u, 1009u, 4001u}) {
        const ExponentVector a{1, 17, 55};
        for (double thr : {0.01, 0.1, 0.5, 1.0}) {
            const auto v = small_sum_count_vectorized(a, p, thr);
            CHECK(v == small_sum_count_scalar(a, p, thr));
        }
    }
}

TEST_CASE("Lawton rows") {
    const ExperimentReport r = run_lawton_rate(parse_poly("1+x1+x2"), {5, 10, 20}, 1u << 16, 0);
    for (const std::string q : {"5", "10", "20"}) CHECK(cell(r, q, "rho") == std::stod(q));
    CHECK(r.summary["reference_exponent"].get<double>() == doctest::Approx(-1.0 / 8));
    CHECK_THROWS_AS(run_lawton_rate(parse_poly("1+x1+x2"), {10, 5}, 1u << 16, 0), InputError);
}

TEST_CASE("sublevel rows") {
    const ExperimentReport r = run_sublevel(parse_poly("1+x1"), {0.2}, 1u << 20, 0);
    CHECK(cell(r, "0.20000000000000001", "volume") == doctest::Approx(0.0637).epsilon(2e-2));
}
