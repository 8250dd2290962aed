#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "curv4/curvature_tensor.hpp"
#include "curv4/expr.hpp"

namespace curv4 {

// Single-chart description of a metric: a coordinate box (periodic per axis)
// with symmetric positive-definite components g(x). Built-in model spaces
// carry closed-form curvature, exact volume, and topological metadata;
// user charts evaluate components from expressions.
struct MetricChart {
    std::string name;
    std::array<std::string, 4> coords{{"x1", "x2", "x3", "x4"}};
    std::array<std::array<double, 2>, 4> domain{};
    std::array<bool, 4> periodic{};

    std::function<Mat4(const Vec4&)> metric;

    // Axes the metric components actually depend on (bit k = axis k). Fields
    // derived from the metric alone are constant along the other axes, which
    // integration exploits after a numerical spot check.
    unsigned varying_mask = 0xF;

    // Curvature identical at every point (model spaces); lets integrals of
    // curvature fields collapse to mean * exact volume.
    bool homogeneous = false;

    std::function<AlgCurvTensor(const Vec4&)> analytic_curvature;  // optional
    std::optional<double> exact_volume;
    std::optional<int> chi;
    std::optional<int> tau;
    bool simply_connected = false;

    // Multiplies the default finite-difference step (1e-4 of axis span).
    double fd_step_scale = 1.0;

    double span(int axis) const { return domain[axis][1] - domain[axis][0]; }
    bool has_analytic_curvature() const { return static_cast<bool>(analytic_curvature); }
};

// Built-in metric catalog.
MetricChart make_round_s4(double radius = 1.0);
MetricChart make_product_s2s2(double r1 = 1.0, double r2 = 1.0);
MetricChart make_fubini_study_cp2(double scale = 1.0);   // s = 24 at scale 1
MetricChart make_flat_t4(const std::array<double, 4>& periods = {1, 1, 1, 1});
MetricChart make_product_s1s3(double r1 = 1.0, double r2 = 1.0);

// Chart from expression components (TOML front end lands here). Missing
// off-diagonal entries are zero; all four diagonal entries are required.
MetricChart make_expr_chart(std::string name,
                            const std::array<std::string, 4>& coords,
                            const std::array<std::array<double, 2>, 4>& domain,
                            const std::array<bool, 4>& periodic,
                            const std::array<std::array<std::optional<expr::Expr>, 4>, 4>& g);

// Metric multiplied by lambda > 0. Curvature scales by 1/lambda, volumes by
// lambda^2; built-in metadata is carried along.
MetricChart rescale(const MetricChart& chart, double lambda);

// Conformal metric e^{2 phi} g. A constant phi reduces to rescale; otherwise
// closed-form curvature is dropped and recomputed by finite differences.
MetricChart conformal_change(const MetricChart& chart, const expr::Expr& phi);

// Pointwise curvature in the orthonormal frame obtained by Gram-Schmidt on
// the coordinate basis (fixed order). Throws ValidationError if the metric
// is not positive definite on the stencil or the stencil leaves the domain.
AlgCurvTensor curvature_at(const MetricChart& chart, const Vec4& x);

double sqrt_det_metric(const MetricChart& chart, const Vec4& x);

}  // namespace curv4
