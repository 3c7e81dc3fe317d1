// Command-line driver. CSV goes to --out (stdout when absent), the JSON summary to --json.
// Exit codes: 0 success, 2 input error, 3 certification failure, 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "gpnorm/cyclonorm.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/experiments.hpp"
#include "gpnorm/lattice.hpp"
#include "gpnorm/mahler.hpp"
#include "gpnorm/parallel.hpp"
#include "gpnorm/rootfind.hpp"

using namespace gpnorm;

namespace {

struct Globals {
    std::string out;
    std::string json;
    std::size_t threads = 0;
    int precision = 53;
};

void emit(const ExperimentReport& rep, const Globals& g) {
    const std::string csv = rep.to_csv();
    if (g.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(g.out, std::ios::binary);
        if (!f) throw InputError("cannot open " + g.out + " for writing");
        f << csv;
    }
    if (!g.json.empty()) {
        std::ofstream f(g.json, std::ios::binary);
        if (!f) throw InputError("cannot open " + g.json + " for writing");
        f << rep.to_json().dump(2) << '\n';
    }
}

ExperimentReport norm_report(u64 p, std::optional<u64> f, const std::vector<i64>& a_list) {
    ExperimentReport rep;
    rep.id = "norm";
    rep.columns = {"p", "a", "delta_abs", "log_mean", "coset_delta"};
    ExponentVector a = f ? period_exponents(p, *f).a : ExponentVector(a_list);
    const NormResult r = compute_norm(a, p);
    std::string coset;
    if (f) coset = delta_signed_cosets(p, *f).delta_signed.get_str();
    std::string as;
    for (std::size_t i = 0; i < a.size(); ++i) as += (i ? ";" : "") + std::to_string(a[i]);
    rep.parameters = {{"p", p}};
    if (f) rep.parameters["f"] = *f;
    rep.parameters["a"] = std::vector<i64>(a.entries().begin(), a.entries().end());
    rep.rows.push_back({std::to_string(p), as, r.delta_abs.get_str(), format_double(r.log_mean), coset});
    rep.summary = {{"delta_abs", r.delta_abs.get_str()}, {"is_unit", r.delta_abs == 1}};
    return rep;
}

ExperimentReport mahler_report(const std::string& poly, u64 budget, u64 seed) {
    const MultiPoly p = parse_poly(poly);
    const MahlerEstimate m = mahler_multivariate(p, budget, seed);
    ExperimentReport rep;
    rep.id = "mahler";
    rep.seed = seed;
    rep.parameters = {{"poly", poly_to_string(p)}, {"budget", budget}};
    rep.columns = {"poly", "value", "error_bound", "method", "samples"};
    rep.rows.push_back({poly_to_string(p), format_double(m.value), format_double(m.error_bound), to_string(m.method),
                        std::to_string(m.samples_used)});
    rep.summary = {{"value", m.value}, {"error_bound", m.error_bound}, {"method", to_string(m.method)}};
    return rep;
}

ExperimentReport omega_report(u64 f) {
    const Subgroup omega = gaussian_omega(f);
    ExperimentReport rep;
    rep.id = "omega";
    rep.parameters = {{"f", f}};
    for (std::size_t j = 0; j < omega.ambient(); ++j) rep.columns.push_back("w" + std::to_string(j + 1));
    for (const auto& row : omega.rows()) {
        std::vector<std::string> cells;
        for (i64 x : row) cells.push_back(std::to_string(x));
        rep.rows.push_back(cells);
    }
    const auto h = omega.rank() >= 2 ? hypothesis_check(omega) : HypothesisResult{true, std::nullopt};
    rep.summary = {{"ambient", omega.ambient()}, {"rank", omega.rank()}, {"hypothesis_holds", h.holds}};
    if (h.witness) {
        const auto& w = *h.witness;
        rep.summary["witness"] = {w.i, w.j, w.k, w.l, w.alpha, w.beta};
    }
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian period norms, Mahler measures and lattice reductions"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "CSV output path (default stdout)");
    app.add_option("--json", g.json, "JSON summary path");
    app.add_option("--threads", g.threads, "worker threads (default GPNORM_THREADS or hardware)");
    app.add_option("--precision", g.precision, "starting root-finding precision in bits")->check(CLI::IsMember({53, 106, 212}));

    u64 p = 0, f = 0, pmax = 0, pmin = 3, budget = 1u << 20, seed = 0;
    std::vector<i64> a;
    std::vector<double> lambdas{1.0}, ys;
    std::vector<u64> qs;
    double c = 1.0;
    std::string poly;
    bool legacy = false;

    auto* norm = app.add_subcommand("norm", "exact norm Delta_p for --a or the period exponents of --f");
    norm->add_option("--p", p, "prime")->required();
    auto* norm_f = norm->add_option("--f", f, "subgroup order");
    auto* norm_a = norm->add_option("--a", a, "exponents a1,a2,...")->delimiter(',');
    norm_f->excludes(norm_a);

    auto* conv = app.add_subcommand("convergence", "log-mean versus m(Omega) over primes p = 1 mod f");
    conv->add_option("--f", f)->required();
    conv->add_option("--pmax", pmax)->required();
    conv->add_option("--pmin", pmin);
    conv->add_option("--budget", budget);
    conv->add_option("--seed", seed);
    conv->add_flag("--legacy", legacy, "admit f = 2");

    auto* units = app.add_subcommand("units", "census of unit norms");
    units->add_option("--f", f)->required();
    units->add_option("--pmax", pmax)->required();

    auto* sums = app.add_subcommand("sums", "count t with |1 + sum zeta^{a_j t}| < p^-lambda / c");
    auto* sums_f = sums->add_option("--f", f);
    auto* sums_a = sums->add_option("--a", a)->delimiter(',');
    sums_f->excludes(sums_a);
    sums->add_option("--pmax", pmax)->required();
    sums->add_option("--pmin", pmin);
    sums->add_option("--lambda", lambdas)->delimiter(',');
    sums->add_option("--c", c);

    auto* lawton = app.add_subcommand("lawton", "m(P(X, X^q, ...)) - m(P)");
    lawton->add_option("--poly", poly)->required();
    lawton->add_option("--q", qs)->delimiter(',')->required();
    lawton->add_option("--budget", budget);
    lawton->add_option("--seed", seed);

    auto* sublevel = app.add_subcommand("sublevel", "volume of {|P(e(x))| < y}");
    sublevel->add_option("--poly", poly)->required();
    sublevel->add_option("--y", ys)->delimiter(',')->required();
    sublevel->add_option("--budget", budget);
    sublevel->add_option("--seed", seed);

    auto* mahler = app.add_subcommand("mahler", "Mahler measure of a Laurent polynomial");
    mahler->add_option("--poly", poly)->required();
    mahler->add_option("--budget", budget);
    mahler->add_option("--seed", seed);

    auto* omega = app.add_subcommand("omega", "Hermite basis of the Gaussian-period lattice");
    omega->add_option("--f", f)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (g.threads > 0) set_thread_count(g.threads);
        set_default_precision_bits(g.precision);
        if (norm->parsed()) {
            if (!*norm_f && !*norm_a) throw InputError("norm: give --f or --a");
            emit(norm_report(p, *norm_f ? std::optional<u64>(f) : std::nullopt, a), g);
        } else if (conv->parsed()) {
            ConvergenceOptions opt;
            opt.f = f;
            opt.p_min = pmin;
            opt.p_max = pmax;
            opt.budget = budget;
            opt.seed = seed;
            opt.legacy = legacy;
            emit(run_convergence(opt), g);
        } else if (units->parsed()) {
            emit(run_unit_census(f, pmax), g);
        } else if (sums->parsed()) {
            SumsOptions opt;
            if (*sums_f) opt.f = f;
            if (*sums_a) opt.a = ExponentVector(a);
            opt.p_min = pmin;
            opt.p_max = pmax;
            opt.lambdas = lambdas;
            opt.c = c;
            emit(run_small_sums_census(opt), g);
        } else if (lawton->parsed()) {
            emit(run_lawton_rate(parse_poly(poly), qs, budget, seed), g);
        } else if (sublevel->parsed()) {
            emit(run_sublevel(parse_poly(poly), ys, budget, seed), g);
        } else if (mahler->parsed()) {
            emit(mahler_report(poly, budget, seed), g);
        } else if (omega->parsed()) {
            emit(omega_report(f), g);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
