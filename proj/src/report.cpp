#include "curv4/report.hpp"

#include <sstream>

#include <json.hpp>

namespace curv4 {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json topo_json(const TopoIntegral& t, bool bg) {
    ordered_json j;
    j["raw"] = t.raw;
    j["snapped"] = t.snapped;
    j["snappedOk"] = t.snapped_ok;
    j["integrandMin"] = t.integrand_min;
    j["integrandMax"] = t.integrand_max;
    if (bg) j["bgResidualMax"] = t.bg_residual_max;
    return j;
}

ordered_json entry_json(const BoundEntry& e) {
    ordered_json j;
    j["name"] = e.name;
    j["paperRef"] = e.ref;
    j["relation"] = e.relation;
    j["lhs"] = e.lhs;
    j["rhs"] = e.rhs;
    j["slack"] = e.slack;
    j["tolerance"] = e.tolerance;
    j["pass"] = e.pass;
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

}  // namespace

bool AnalysisReport::bounds_all_pass() const {
    for (const auto& b : bounds)
        if (!b.all_pass()) return false;
    return true;
}

std::string to_json(const AnalysisReport& r, bool include_timings) {
    ordered_json j;
    j["schema"] = r.schema;
    j["metric"]["name"] = r.metric_name;
    j["metric"]["source"] = r.metric_source;
    j["metric"]["params"] = ordered_json::object();
    for (const auto& [k, v] : r.params) j["metric"]["params"][k] = v;
    j["grid"] = r.grid;
    j["seed"] = r.seed;

    j["samples"] = ordered_json::array();
    for (const auto& s : r.samples) {
        ordered_json sj;
        sj["x"] = s.x;
        sj["s"] = s.s;
        sj["eigPlus"] = s.eig_plus;
        sj["eigMinus"] = s.eig_minus;
        sj["ric0Norm"] = s.ric0_norm;
        sj["k1perp"] = s.k1perp;
        sj["k3perp"] = s.k3perp;
        j["samples"].push_back(sj);
    }

    if (r.functionals) {
        const auto& f = *r.functionals;
        ordered_json fj;
        fj["weylFunc"] = f.weyl_func;
        fj["e1perp"] = f.e1perp;
        fj["yamabeMod"] = f.yamabe_mod;
        fj["rInfinity"] = f.r_infinity;
        fj["supAbsKperp"] = f.sup_abs_kperp;
        fj["supAbsK"] = f.sup_abs_k;
        fj["vol"] = f.vol;
        j["functionals"] = fj;
    }

    if (r.topology) {
        const auto& t = *r.topology;
        ordered_json tj;
        tj["chi"] = topo_json(t.chi, false);
        tj["tau"] = topo_json(t.tau, false);
        if (t.chi_bg) tj["chiBG"] = topo_json(*t.chi_bg, true);
        if (t.tau_gray) tj["tauGray"] = topo_json(*t.tau_gray, true);
        if (!t.bg_notice.empty()) tj["bgNotice"] = t.bg_notice;
        if (t.betti_b1) {
            tj["betti"]["b1"] = *t.betti_b1;
            tj["betti"]["b2"] = *t.betti_b2;
        }
        j["topology"] = tj;
    }

    if (r.extremes) {
        const auto& e = *r.extremes;
        ordered_json ej;
        ej["closed"] = {e.k1_closed, e.k3_closed};
        ej["brute"] = {e.brute_min, e.brute_max};
        ej["discrepancy"] = e.discrepancy;
        ej["samples"] = e.samples;
        j["extremes"] = ej;
    }

    if (!r.bounds.empty()) {
        j["bounds"] = ordered_json::array();
        for (const auto& b : r.bounds) {
            ordered_json bj;
            bj["metric"] = b.metric;
            bj["normalization"] = b.normalization;
            bj["allPass"] = b.all_pass();
            bj["entries"] = ordered_json::array();
            for (const auto& e : b.entries) bj["entries"].push_back(entry_json(e));
            j["bounds"].push_back(bj);
        }
    }

    if (include_timings) {
        j["timingsMs"] = ordered_json::object();
        for (const auto& [k, v] : r.timings_ms) j["timingsMs"][k] = v;
    }

    return j.dump(2) + "\n";
}

std::string to_markdown(const AnalysisReport& r, bool include_timings) {
    std::ostringstream os;
    os.precision(12);
    os << "# curv4 report: " << r.metric_name << "\n\n";
    os << "- source: " << r.metric_source << "\n";
    os << "- grid: " << r.grid[0] << "x" << r.grid[1] << "x" << r.grid[2] << "x" << r.grid[3]
       << "\n";
    os << "- seed: " << r.seed << "\n";

    if (!r.samples.empty()) {
        os << "\n## Decomposition samples\n\n";
        os << "| x | s | w+ eigenvalues | w- eigenvalues | |ric0| | K1perp | K3perp |\n";
        os << "|---|---|----------------|----------------|--------|--------|--------|\n";
        for (const auto& s : r.samples) {
            os << "| (" << s.x[0] << ", " << s.x[1] << ", " << s.x[2] << ", " << s.x[3] << ") | "
               << s.s << " | (" << s.eig_plus[0] << ", " << s.eig_plus[1] << ", "
               << s.eig_plus[2] << ") | (" << s.eig_minus[0] << ", " << s.eig_minus[1] << ", "
               << s.eig_minus[2] << ") | " << s.ric0_norm << " | " << s.k1perp << " | "
               << s.k3perp << " |\n";
        }
    }

    if (r.topology) {
        const auto& t = *r.topology;
        os << "\n## Topology\n\n";
        os << "- chi (Euler integrand): raw " << t.chi.raw << ", snapped " << t.chi.snapped
           << "\n";
        os << "- tau (signature integrand): raw " << t.tau.raw << ", snapped " << t.tau.snapped
           << "\n";
        if (t.chi_bg)
            os << "- chi (special-basis formula): raw " << t.chi_bg->raw << "\n";
        if (t.tau_gray)
            os << "- tau (special-basis formula): raw " << t.tau_gray->raw << "\n";
        if (!t.bg_notice.empty()) os << "- note: " << t.bg_notice << "\n";
        if (t.betti_b1)
            os << "- Betti annotation (simply connected): b1 = " << *t.betti_b1
               << ", b2 = " << *t.betti_b2 << " (chi = 2 - 2 b1 + b2)\n";
    }

    if (r.functionals) {
        const auto& f = *r.functionals;
        os << "\n## Functionals\n\n";
        os << "- vol: " << f.vol << "\n";
        os << "- weylFunc: " << f.weyl_func << "\n";
        os << "- e1perp: " << f.e1perp << "\n";
        os << "- yamabeMod (value at g): " << f.yamabe_mod << "\n";
        os << "- rInfinity: " << f.r_infinity << "\n";
        os << "- supAbsKperp: " << f.sup_abs_kperp << "\n";
        os << "- supAbsK: " << f.sup_abs_k << "\n";
    }

    if (r.extremes) {
        const auto& e = *r.extremes;
        os << "\n## Biorthogonal extremes\n\n";
        os << "- closed form: [" << e.k1_closed << ", " << e.k3_closed << "]\n";
        os << "- brute force (" << e.samples << " samples): [" << e.brute_min << ", "
           << e.brute_max << "]\n";
        os << "- discrepancy: " << e.discrepancy << "\n";
    }

    for (const auto& b : r.bounds) {
        os << "\n## Bounds: " << b.metric << "\n\n";
        os << "normalization: " << b.normalization << "\n\n";
        os << "| entry | ref | lhs | rel | rhs | slack | pass |\n";
        os << "|-------|-----|-----|-----|-----|-------|------|\n";
        for (const auto& e : b.entries) {
            os << "| " << e.name << " | " << e.ref << " | " << e.lhs << " | " << e.relation
               << " | " << e.rhs << " | " << e.slack << " | " << (e.pass ? "yes" : "NO")
               << (e.note.empty() ? "" : " (" + e.note + ")") << " |\n";
        }
    }

    if (include_timings && !r.timings_ms.empty()) {
        os << "\n## Timings (ms)\n\n";
        for (const auto& [k, v] : r.timings_ms) os << "- " << k << ": " << v << "\n";
    }

    return os.str();
}

std::string sweep_to_json(const std::string& family, const std::vector<SweepRow>& rows) {
    ordered_json j;
    j["schema"] = "curv4/1";
    j["family"] = family;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json rj;
        rj["t"] = r.t;
        rj["vol"] = r.vol;
        rj["supAbsK"] = r.sup_abs_k;
        rj["supAbsKperp"] = r.sup_abs_kperp;
        rj["rInfinity"] = r.r_infinity;
        j["rows"].push_back(rj);
    }
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "t,vol,supAbsK,supAbsKperp,rInfinity\n";
    for (const auto& r : rows)
        os << r.t << "," << r.vol << "," << r.sup_abs_k << "," << r.sup_abs_kperp << ","
           << r.r_infinity << "\n";
    return os.str();
}

}  // namespace curv4
