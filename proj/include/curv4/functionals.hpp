#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curv4/expr.hpp"
#include "curv4/quadrature.hpp"

namespace curv4 {

// Scalars of a metric the estimates are phrased in: the conformally invariant
// Weyl energy W(g) = int |W|^2, E1(g) = int (s - 12 K1perp)^2, the modified
// Yamabe value 12 Vol^{-1/2} int K1perp, and the sup-norms.
struct FunctionalValues {
    double weyl_func = 0.0;
    double e1perp = 0.0;
    double yamabe_mod = 0.0;
    double r_infinity = 0.0;    // sup |Rm|
    double sup_abs_kperp = 0.0; // sup over points and planes of |K_perp|
    double sup_abs_k = 0.0;     // sup over points and planes of |K|
    double vol = 0.0;
};

FunctionalValues functional_values(const MetricChart& chart, const std::array<int, 4>& n,
                                   std::uint64_t seed = 0);

// Estimated sup of |sectional curvature| over the whole chart: per-node plane
// optimization, pruned by the operator-norm envelope of the curvature
// operator (sound: |K| at a point never exceeds the envelope).
double sup_abs_sectional_over_chart(const MetricChart& chart, const std::array<int, 4>& n,
                                    std::uint64_t seed = 0);

MetricChart normalize_unit_volume(const MetricChart& chart, const std::array<int, 4>& n);

struct NormalizeResult {
    MetricChart chart;
    double lambda = 1.0;
    bool noop = false;
    std::string notice;
};

// Rescale so sup |K_perp| = 1; a biorthogonally flat chart is returned
// unchanged with a notice.
NormalizeResult normalize_sup_kperp(const MetricChart& chart, const std::array<int, 4>& n,
                                    std::uint64_t seed = 0);

struct BoundEntry {
    std::string name;      // e.g. "thm1-item2"
    std::string ref;       // human label, e.g. "Theorem 1(2)"
    std::string relation;  // ">=" or "<="
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // >= -tolerance iff pass, signed along the relation
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct BoundReport {
    std::string metric;
    std::string normalization;
    std::vector<BoundEntry> entries;
    bool all_pass() const;
};

BoundReport theorem_one_suite(const MetricChart& chart, const std::array<int, 4>& n,
                              std::uint64_t seed = 0);
BoundReport theorem_three_suite(const MetricChart& chart, const std::array<int, 4>& n,
                                std::uint64_t seed = 0);
BoundReport lemma_suite(const MetricChart& chart, const std::array<int, 4>& n,
                        std::uint64_t seed = 0);
BoundReport conformal_suite(const MetricChart& chart, const expr::Expr& phi,
                            const std::array<int, 4>& n, std::uint64_t seed = 0);

struct SweepRow {
    double t = 0.0;
    double vol = 0.0;
    double sup_abs_k = 0.0;
    double sup_abs_kperp = 0.0;
    double r_infinity = 0.0;
};

// Built-in one-parameter families: "s1xs3-collapse" (circle radius t) and
// "flat-t4" (first period t).
MetricChart family_member(const std::string& family, double t);
std::vector<SweepRow> family_sweep(const std::string& family, const std::vector<double>& ts,
                                   const std::array<int, 4>& n, std::uint64_t seed = 0);

}  // namespace curv4
