#include "curv4/chart.hpp"

#include <cmath>
#include <numbers>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {
constexpr double kPi = std::numbers::pi;
}

MetricChart make_round_s4(double radius) {
    // Hyperspherical angles: g = r^2 diag(1, sin^2 x1, sin^2 x1 sin^2 x2,
    // sin^2 x1 sin^2 x2 sin^2 x3) on (0,pi)^3 x (0,2pi).
    MetricChart c;
    c.name = "s4";
    c.domain = {{{0, kPi}, {0, kPi}, {0, kPi}, {0, 2 * kPi}}};
    c.periodic = {false, false, false, true};
    const double r2 = radius * radius;
    c.metric = [r2](const Vec4& x) {
        const double s1 = std::sin(x[0]), s2 = std::sin(x[1]), s3 = std::sin(x[2]);
        Mat4 g = Mat4::Zero();
        g(0, 0) = r2;
        g(1, 1) = r2 * s1 * s1;
        g(2, 2) = g(1, 1) * s2 * s2;
        g(3, 3) = g(2, 2) * s3 * s3;
        return g;
    };
    c.varying_mask = 0b0111;
    c.homogeneous = true;
    const AlgCurvTensor t = round_sphere_tensor(radius);
    c.analytic_curvature = [t](const Vec4&) { return t; };
    c.exact_volume = 8.0 * kPi * kPi / 3.0 * r2 * r2;
    c.chi = 2;
    c.tau = 0;
    c.simply_connected = true;
    return c;
}

MetricChart make_product_s2s2(double r1, double r2) {
    MetricChart c;
    c.name = "s2xs2";
    c.domain = {{{0, kPi}, {0, 2 * kPi}, {0, kPi}, {0, 2 * kPi}}};
    c.periodic = {false, true, false, true};
    const double a = r1 * r1, b = r2 * r2;
    c.metric = [a, b](const Vec4& x) {
        const double s1 = std::sin(x[0]), s2 = std::sin(x[2]);
        Mat4 g = Mat4::Zero();
        g(0, 0) = a;
        g(1, 1) = a * s1 * s1;
        g(2, 2) = b;
        g(3, 3) = b * s2 * s2;
        return g;
    };
    c.varying_mask = 0b0101;
    c.homogeneous = true;
    const AlgCurvTensor t = product_s2s2_tensor(r1, r2);
    c.analytic_curvature = [t](const Vec4&) { return t; };
    c.exact_volume = 16.0 * kPi * kPi * a * b;
    c.chi = 4;
    c.tau = 0;
    c.simply_connected = true;
    return c;
}

MetricChart make_fubini_study_cp2(double scale) {
    // Affine chart compactified by z_a = tan(u_a): covers the manifold minus
    // a complex line. Coordinates ordered (Re z1, Im z1, Re z2, Im z2) so the
    // Gram-Schmidt frame is adapted to the complex structure.
    MetricChart c;
    c.name = "cp2";
    c.domain = {{{-kPi / 2, kPi / 2},
                 {-kPi / 2, kPi / 2},
                 {-kPi / 2, kPi / 2},
                 {-kPi / 2, kPi / 2}}};
    c.periodic = {false, false, false, false};
    c.metric = [scale](const Vec4& u) {
        Vec4 x, sec2;
        for (int a = 0; a < 4; ++a) {
            x[a] = std::tan(u[a]);
            const double cs = std::cos(u[a]);
            sec2[a] = 1.0 / (cs * cs);
        }
        const double rho = 1.0 + x.squaredNorm();
        const Vec4 jx(-x[1], x[0], -x[3], x[2]);
        Mat4 g;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double gab =
                    ((a == b ? rho : 0.0) - x[a] * x[b] - jx[a] * jx[b]) / (rho * rho);
                g(a, b) = scale * gab * sec2[a] * sec2[b];
            }
        return g;
    };
    c.varying_mask = 0xF;
    c.homogeneous = true;
    const AlgCurvTensor t = fubini_study_tensor(scale);
    c.analytic_curvature = [t](const Vec4&) { return t; };
    c.exact_volume = kPi * kPi / 2.0 * scale * scale;
    c.chi = 3;
    c.tau = 1;
    c.simply_connected = true;
    return c;
}

MetricChart make_flat_t4(const std::array<double, 4>& periods) {
    MetricChart c;
    c.name = "flat-t4";
    for (int a = 0; a < 4; ++a) c.domain[a] = {0.0, periods[a]};
    c.periodic = {true, true, true, true};
    c.metric = [](const Vec4&) { return Mat4::Identity().eval(); };
    c.varying_mask = 0;
    c.homogeneous = true;
    c.analytic_curvature = [](const Vec4&) { return AlgCurvTensor{}; };
    c.exact_volume = periods[0] * periods[1] * periods[2] * periods[3];
    c.chi = 0;
    c.tau = 0;
    return c;
}

MetricChart make_product_s1s3(double r1, double r2) {
    MetricChart c;
    c.name = "s1xs3";
    c.domain = {{{0, 2 * kPi}, {0, kPi}, {0, kPi}, {0, 2 * kPi}}};
    c.periodic = {true, false, false, true};
    const double a = r1 * r1, b = r2 * r2;
    c.metric = [a, b](const Vec4& x) {
        const double s1 = std::sin(x[1]), s2 = std::sin(x[2]);
        Mat4 g = Mat4::Zero();
        g(0, 0) = a;
        g(1, 1) = b;
        g(2, 2) = b * s1 * s1;
        g(3, 3) = g(2, 2) * s2 * s2;
        return g;
    };
    c.varying_mask = 0b0110;
    c.homogeneous = true;
    const AlgCurvTensor t = product_s1s3_tensor(r2);
    c.analytic_curvature = [t](const Vec4&) { return t; };
    c.exact_volume = (2 * kPi * r1) * (2 * kPi * kPi * r2 * r2 * r2);
    c.chi = 0;
    c.tau = 0;
    return c;
}

namespace {

// Components on a periodic axis must take equal values at the two interval
// ends; probed at a few deterministic points of the remaining coordinates.
void check_periodicity(const MetricChart& chart) {
    for (int a = 0; a < 4; ++a) {
        if (!chart.periodic[a]) continue;
        for (int probe = 0; probe < 4; ++probe) {
            Vec4 lo;
            for (int b = 0; b < 4; ++b)
                lo[b] = chart.domain[b][0] + chart.span(b) * (0.17 + 0.19 * probe + 0.07 * b);
            Vec4 hi = lo;
            lo[a] = chart.domain[a][0];
            hi[a] = chart.domain[a][1];
            const Mat4 gl = chart.metric(lo), gh = chart.metric(hi);
            if ((gl - gh).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + gl.cwiseAbs().maxCoeff()))
                throw ValidationError("metric of '" + chart.name +
                                      "' is not periodic along axis " + std::to_string(a + 1));
        }
    }
}

}  // namespace

MetricChart make_expr_chart(std::string name,
                            const std::array<std::string, 4>& coords,
                            const std::array<std::array<double, 2>, 4>& domain,
                            const std::array<bool, 4>& periodic,
                            const std::array<std::array<std::optional<expr::Expr>, 4>, 4>& g) {
    MetricChart c;
    c.name = std::move(name);
    c.coords = coords;
    c.domain = domain;
    c.periodic = periodic;

    unsigned mask = 0;
    std::array<std::array<std::optional<expr::Expr>, 4>, 4> comps = g;
    for (int i = 0; i < 4; ++i) {
        if (!comps[i][i])
            throw ValidationError("metric component g" + std::to_string(i + 1) +
                                  std::to_string(i + 1) + " is required");
        for (int j = 0; j < 4; ++j)
            if (comps[i][j]) mask |= comps[i][j]->coord_mask();
    }
    c.varying_mask = mask;
    c.metric = [comps](const Vec4& x) {
        const std::array<double, 4> p = {x[0], x[1], x[2], x[3]};
        Mat4 m = Mat4::Zero();
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                if (comps[i][j]) {
                    const double v = comps[i][j]->eval(p);
                    m(i, j) = v;
                    m(j, i) = v;
                }
        return m;
    };
    check_periodicity(c);
    return c;
}

MetricChart rescale(const MetricChart& chart, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("rescale factor must be positive");
    MetricChart c = chart;
    if (lambda == 1.0) return c;
    const auto base_metric = chart.metric;
    c.metric = [base_metric, lambda](const Vec4& x) { return (lambda * base_metric(x)).eval(); };
    if (chart.analytic_curvature) {
        const auto base_curv = chart.analytic_curvature;
        c.analytic_curvature = [base_curv, lambda](const Vec4& x) {
            AlgCurvTensor t = base_curv(x);
            for (double& v : t.raw()) v /= lambda;
            return t;
        };
    }
    if (chart.exact_volume) c.exact_volume = *chart.exact_volume * lambda * lambda;
    return c;
}

MetricChart conformal_change(const MetricChart& chart, const expr::Expr& phi) {
    if (phi.is_constant()) {
        const double v = phi.eval({0, 0, 0, 0});
        return rescale(chart, std::exp(2.0 * v));
    }
    MetricChart c = chart;
    c.name = chart.name + "(conformal)";
    const auto base_metric = chart.metric;
    c.metric = [base_metric, phi](const Vec4& x) {
        const double f = std::exp(2.0 * phi.eval({x[0], x[1], x[2], x[3]}));
        return (f * base_metric(x)).eval();
    };
    c.varying_mask = chart.varying_mask | phi.coord_mask();
    c.homogeneous = false;
    c.analytic_curvature = nullptr;
    c.exact_volume.reset();
    check_periodicity(c);
    return c;
}

double sqrt_det_metric(const MetricChart& chart, const Vec4& x) {
    const double det = chart.metric(x).determinant();
    if (!(det > 0.0))
        throw ValidationError("metric is not positive definite at a sampled point of " +
                              chart.name);
    return std::sqrt(det);
}

}  // namespace curv4
