#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curv4/functionals.hpp"
#include "curv4/topology.hpp"

namespace curv4 {

// Decomposition summary at one chart point.
struct SampleSummary {
    std::array<double, 4> x{};
    double s = 0.0;
    std::array<double, 3> eig_plus{};
    std::array<double, 3> eig_minus{};
    double ric0_norm = 0.0;
    double k1perp = 0.0;
    double k3perp = 0.0;
};

struct TopologySummary {
    TopoIntegral chi;
    TopoIntegral tau;
    std::optional<TopoIntegral> chi_bg;     // special-basis Euler formula
    std::optional<TopoIntegral> tau_gray;   // special-basis signature formula
    std::string bg_notice;                  // set when the BG formulas were skipped
    std::optional<int> betti_b1;            // simply connected built-ins only
    std::optional<int> betti_b2;
};

struct ExtremesSummary {
    double k1_closed = 0.0;
    double k3_closed = 0.0;
    double brute_min = 0.0;
    double brute_max = 0.0;
    double discrepancy = 0.0;
    int samples = 0;
};

struct AnalysisReport {
    std::string schema = "curv4/1";
    std::string metric_name;
    std::string metric_source;  // "builtin" or "file"
    std::map<std::string, double> params;
    std::array<int, 4> grid{};
    std::uint64_t seed = 0;

    std::vector<SampleSummary> samples;
    std::optional<FunctionalValues> functionals;
    std::optional<TopologySummary> topology;
    std::optional<ExtremesSummary> extremes;
    std::vector<BoundReport> bounds;
    std::map<std::string, double> timings_ms;  // filled only when requested

    bool bounds_all_pass() const;
};

std::string to_json(const AnalysisReport& report, bool include_timings);
std::string to_markdown(const AnalysisReport& report, bool include_timings);

std::string sweep_to_json(const std::string& family, const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace curv4
