// curv4 command-line front end: analyze, verify, sweep.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curv4/biorthogonal.hpp"
#include "curv4/errors.hpp"
#include "curv4/report.hpp"
#include "curv4/toml.hpp"

namespace {

using namespace curv4;

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitBoundFailure = 4;

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

MetricChart resolve_metric(const std::string& spec, const std::map<std::string, double>& params,
                           std::string& source) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".toml") {
        source = "file";
        return chart_from_toml_file(spec);
    }
    source = "builtin";
    if (spec == "s4") return make_round_s4(param_or(params, "r", 1.0));
    if (spec == "s2xs2")
        return make_product_s2s2(param_or(params, "r1", 1.0), param_or(params, "r2", 1.0));
    if (spec == "cp2") return make_fubini_study_cp2(param_or(params, "scale", 1.0));
    if (spec == "flat-t4")
        return make_flat_t4({param_or(params, "p1", 1.0), param_or(params, "p2", 1.0),
                             param_or(params, "p3", 1.0), param_or(params, "p4", 1.0)});
    if (spec == "s1xs3")
        return make_product_s1s3(param_or(params, "r1", 1.0), param_or(params, "r2", 1.0));
    throw ValidationError("unknown metric '" + spec +
                          "' (builtins: s4, s2xs2, cp2, flat-t4, s1xs3; or a .toml file)");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--param expects key=value, got '" + kv + "'");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ValidationError("--param value in '" + kv + "' is not a number");
        }
    }
    return out;
}

SampleSummary summarize_sample(const MetricChart& chart, const Vec4& x) {
    const PointSample s = sample_at(chart, x);
    SampleSummary out;
    for (int a = 0; a < 4; ++a) out.x[static_cast<std::size_t>(a)] = x[a];
    out.s = s.dec.s;
    out.eig_plus = s.dec.eig_plus;
    out.eig_minus = s.dec.eig_minus;
    out.ric0_norm = std::sqrt(s.norms.ric02);
    const auto [k1, k3] = k_perp_extremes(s.dec);
    out.k1perp = k1;
    out.k3perp = k3;
    return out;
}

Vec4 chart_center(const MetricChart& chart) {
    Vec4 x;
    for (int a = 0; a < 4; ++a) x[a] = 0.5 * (chart.domain[a][0] + chart.domain[a][1]);
    return x;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

int run_analyze(const std::string& metric_spec, const std::vector<std::string>& param_kvs,
                int grid, const std::string& format, std::uint64_t seed, int brute_samples,
                bool timings) {
    AnalysisReport rep;
    rep.params = parse_params(param_kvs);
    rep.grid = {grid, grid, grid, grid};
    rep.seed = seed;

    const MetricChart chart = resolve_metric(metric_spec, rep.params, rep.metric_source);
    rep.metric_name = chart.name;
    const std::array<int, 4> n = rep.grid;

    Timer total;

    // Decomposition at the chart centre and two deterministic interior points.
    {
        Timer t;
        rep.samples.push_back(summarize_sample(chart, chart_center(chart)));
        for (std::size_t k = 0; k < 2; ++k) {
            const auto u = quasirandom4(k);
            Vec4 x;
            for (int a = 0; a < 4; ++a) {
                const double margin = chart.periodic[a] ? 0.0 : 0.05 * chart.span(a);
                x[a] = chart.domain[a][0] + margin +
                       u[static_cast<std::size_t>(a)] * (chart.span(a) - 2 * margin);
            }
            rep.samples.push_back(summarize_sample(chart, x));
        }
        rep.timings_ms["samples"] = t.ms();
    }

    // Biorthogonal extremes at the centre: closed form against brute force.
    {
        Timer t;
        const PointSample s = sample_at(chart, chart_center(chart));
        const auto [k1, k3] = k_perp_extremes(s.dec);
        const BruteExtremes brute = k_extremes_brute(s.tensor, brute_samples, 14, seed);
        ExtremesSummary ex;
        ex.k1_closed = k1;
        ex.k3_closed = k3;
        ex.brute_min = brute.min;
        ex.brute_max = brute.max;
        ex.discrepancy =
            std::max(std::abs(brute.min - k1), std::abs(brute.max - k3));
        ex.samples = brute_samples;
        rep.extremes = ex;
        rep.timings_ms["extremes"] = t.ms();
    }

    // Topological integrals, all four routes.
    {
        Timer t;
        TopologySummary topo;
        topo.chi = gauss_bonnet_chi(chart, n, seed);
        topo.tau = hirzebruch_tau(chart, n, seed);
        try {
            topo.chi_bg = bg_euler_chi(chart, n, seed);
            topo.tau_gray = gray_signature_tau(chart, n, seed);
        } catch (const ConvergenceError& e) {
            topo.bg_notice = std::string("special-basis formulas skipped: ") + e.what();
        }
        if (chart.simply_connected && chart.chi) {
            topo.betti_b1 = 0;
            topo.betti_b2 = *chart.chi - 2;
        }
        rep.topology = topo;
        rep.timings_ms["topology"] = t.ms();
    }

    {
        Timer t;
        rep.functionals = functional_values(chart, n, seed);
        rep.timings_ms["functionals"] = t.ms();
    }
    rep.timings_ms["total"] = total.ms();

    std::cout << (format == "md" ? to_markdown(rep, timings) : to_json(rep, timings));
    return 0;
}

int run_verify(const std::string& metric_spec, const std::vector<std::string>& param_kvs,
               const std::string& suites_csv, const std::string& phi_text, int grid,
               const std::string& format, std::uint64_t seed, bool timings) {
    AnalysisReport rep;
    rep.params = parse_params(param_kvs);
    rep.grid = {grid, grid, grid, grid};
    rep.seed = seed;

    const MetricChart chart = resolve_metric(metric_spec, rep.params, rep.metric_source);
    rep.metric_name = chart.name;
    const std::array<int, 4> n = rep.grid;

    std::vector<std::string> suites;
    std::string token;
    for (char c : suites_csv + ",") {
        if (c == ',') {
            if (!token.empty()) suites.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (suites.empty()) throw ValidationError("--suite expects a non-empty list");

    Timer total;
    for (const auto& suite : suites) {
        if (suite == "theorem1") {
            rep.bounds.push_back(theorem_one_suite(chart, n, seed));
        } else if (suite == "theorem3") {
            rep.bounds.push_back(theorem_three_suite(chart, n, seed));
        } else if (suite == "lemmas") {
            rep.bounds.push_back(lemma_suite(chart, n, seed));
        } else if (suite == "conformal") {
            if (phi_text.empty())
                throw ValidationError("--suite conformal requires --phi \"<expression>\"");
            rep.bounds.push_back(conformal_suite(chart, expr::parse(phi_text), n, seed));
        } else {
            throw ValidationError("unknown suite '" + suite +
                                  "' (theorem1, theorem3, lemmas, conformal)");
        }
        rep.bounds.back().metric = chart.name + " [" + suite + "]";
    }
    rep.timings_ms["total"] = total.ms();

    std::cout << (format == "md" ? to_markdown(rep, timings) : to_json(rep, timings));
    if (!rep.bounds_all_pass()) {
        for (const auto& b : rep.bounds)
            for (const auto& e : b.entries)
                if (!e.pass)
                    std::cerr << "FAILED bound " << e.name << " (" << b.metric << "): " << e.lhs
                              << " " << e.relation << " " << e.rhs << " violated by "
                              << -e.slack << "\n";
        return kExitBoundFailure;
    }
    return 0;
}

int run_sweep(const std::string& family, double t_min, double t_max, int steps, int grid,
              const std::string& format, std::uint64_t seed) {
    if (!(t_min > 0.0) || !(t_max >= t_min) || steps < 1)
        throw ValidationError("sweep needs 0 < t-min <= t-max and steps >= 1");
    std::vector<double> ts;
    for (int i = 0; i < steps; ++i)
        ts.push_back(steps == 1 ? t_min
                                : t_min + (t_max - t_min) * i / (steps - 1));
    const auto rows = family_sweep(family, ts, {grid, grid, grid, grid}, seed);
    std::cout << (format == "csv" ? sweep_to_csv(rows) : sweep_to_json(family, rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curv4: curvature decomposition, topological integrals, and "
                 "inequality certification for 4-dimensional metric charts"};
    app.require_subcommand(1);

    std::string metric, format = "json", suites, phi, family = "s1xs3-collapse";
    std::vector<std::string> params;
    int grid = 16, steps = 20, brute_samples = 10000;
    std::uint64_t seed = 0;
    double t_min = 0.01, t_max = 1.0;
    bool timings = false;

    auto* analyze = app.add_subcommand("analyze", "decompose, locate extremes, recover chi/tau");
    analyze->add_option("--metric", metric, "builtin name or metric .toml file")->required();
    analyze->add_option("--param", params, "builtin parameter, key=value");
    analyze->add_option("--grid", grid, "nodes per axis")->check(CLI::Range(8, 4096));
    analyze->add_option("--format", format)->check(CLI::IsMember({"json", "md"}));
    analyze->add_option("--seed", seed, "seed for all stochastic estimators");
    analyze->add_option("--brute-samples", brute_samples, "plane samples for brute extremes");
    analyze->add_flag("--timings", timings, "include wall-clock timings in the report");

    auto* verify = app.add_subcommand("verify", "run inequality suites, exit 4 on any failure");
    verify->add_option("--metric", metric)->required();
    verify->add_option("--param", params, "builtin parameter, key=value");
    verify->add_option("--suite", suites, "comma list: theorem1,theorem3,lemmas,conformal")
        ->required();
    verify->add_option("--phi", phi, "conformal factor expression for the conformal suite");
    verify->add_option("--grid", grid, "nodes per axis")->check(CLI::Range(8, 4096));
    verify->add_option("--format", format)->check(CLI::IsMember({"json", "md"}));
    verify->add_option("--seed", seed);
    verify->add_flag("--timings", timings);

    auto* sweep = app.add_subcommand("sweep", "tabulate a one-parameter family");
    sweep->add_option("--family", family, "s1xs3-collapse or flat-t4");
    sweep->add_option("--t-min", t_min);
    sweep->add_option("--t-max", t_max);
    sweep->add_option("--steps", steps);
    sweep->add_option("--grid", grid)->check(CLI::Range(8, 4096));
    sweep->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    sweep->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : 0;
    }

    try {
        if (analyze->parsed())
            return run_analyze(metric, params, grid, format, seed, brute_samples, timings);
        if (verify->parsed())
            return run_verify(metric, params, suites, phi, grid, format, seed, timings);
        return run_sweep(family, t_min, t_max, steps, grid, format, seed);
    } catch (const ConvergenceError& e) {
        std::cerr << "error (non-convergence): " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const ParseError& e) {
        std::cerr << "error (parse): " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
