#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curv4/chart.hpp"
#include "curv4/decomposition.hpp"

namespace curv4 {

// Tensor-product quadrature: Gauss-Legendre on non-periodic axes (open rule,
// nodes interior), uniform trapezoid on periodic axes. Weights exclude the
// sqrt(det g) volume factor, which is applied per node.
struct QuadratureGrid {
    std::array<int, 4> n{};
    std::array<std::vector<double>, 4> nodes;
    std::array<std::vector<double>, 4> weights;

    static QuadratureGrid build(const MetricChart& chart, const std::array<int, 4>& n);

    double axis_weight_sum(int a) const;
    std::size_t total_nodes() const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Everything pointwise the functionals consume, computed once per node.
struct PointSample {
    Vec4 x;
    AlgCurvTensor tensor;
    CurvDecomposition dec;
    CurvNorms norms;
    double sqrt_det_g = 0.0;
};

using FieldFn = std::function<double(const PointSample&)>;

struct FieldSummary {
    double integral = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct PassOptions {
    std::uint64_t seed = 0;
    int sup_probes = 1000;   // extra deterministic interior samples for sups
    bool fast_paths = true;  // homogeneous / axis-constancy shortcuts
};

struct PassResult {
    double volume = 0.0;
    std::vector<FieldSummary> fields;
    std::string path;  // "homogeneous", "reduced", or "full"
};

PointSample sample_at(const MetricChart& chart, const Vec4& x);

// Evaluates all fields in one sweep. Homogeneous charts use a 32-point spot
// check and return mean * exact volume (failure of the spot check throws
// ConvergenceError). Charts whose metric ignores some axes are integrated
// over the varying axes only, after a numeric spot check of the claimed
// constancy; on mismatch the full grid is used.
PassResult evaluate_fields(const MetricChart& chart, const std::array<int, 4>& n,
                           const std::vector<FieldFn>& fields,
                           const PassOptions& opts = {});

// Total volume, with a refinement gate on non-closed-form charts: values at
// n and 2n must agree to 1e-6 relative or ConvergenceError is thrown.
double volume(const MetricChart& chart, const std::array<int, 4>& n);

double integrate(const MetricChart& chart, const std::array<int, 4>& n,
                 const FieldFn& field, std::uint64_t seed = 0);

}  // namespace curv4
