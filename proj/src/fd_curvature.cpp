#include <cmath>

#include <Eigen/Cholesky>

#include "curv4/chart.hpp"
#include "curv4/errors.hpp"

namespace curv4 {

namespace {

Mat4 eval_checked(const MetricChart& chart, const Vec4& x) {
    Mat4 g = chart.metric(x);
    Eigen::LLT<Mat4> llt(g);
    if (llt.info() != Eigen::Success)
        throw ValidationError("metric is not positive definite on the finite-difference stencil of " +
                              chart.name);
    return g;
}

}  // namespace

AlgCurvTensor curvature_at(const MetricChart& chart, const Vec4& x) {
    if (chart.analytic_curvature) return chart.analytic_curvature(x);

    // Step per axis: 1e-4 of the span, shrunk near non-periodic boundaries so
    // the 2h stencil stays strictly inside the domain.
    Vec4 h;
    for (int a = 0; a < 4; ++a) {
        const double span = chart.span(a);
        double step = 1e-4 * span * chart.fd_step_scale;
        if (!chart.periodic[a]) {
            const double dist =
                std::min(x[a] - chart.domain[a][0], chart.domain[a][1] - x[a]);
            const double floor_step = 1e-6 * span;
            if (dist < 2.6 * floor_step)
                throw ValidationError("finite-difference stencil leaves the domain of " +
                                      chart.name);
            step = std::min(step, dist / 2.6);
        }
        h[a] = step;
    }

    auto at_offset = [&](int axis_a, int ia, int axis_b, int ib) {
        Vec4 p = x;
        p[axis_a] += ia * h[axis_a];
        if (axis_b >= 0) p[axis_b] += ib * h[axis_b];
        return eval_checked(chart, p);
    };

    const Mat4 g0 = eval_checked(chart, x);

    // 4th-order first and second derivatives of every component.
    Mat4 dg[4];
    Mat4 d2g[4][4];
    for (int a = 0; a < 4; ++a) {
        const Mat4 m2 = at_offset(a, -2, -1, 0);
        const Mat4 m1 = at_offset(a, -1, -1, 0);
        const Mat4 p1 = at_offset(a, +1, -1, 0);
        const Mat4 p2 = at_offset(a, +2, -1, 0);
        dg[a] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h[a]);
        d2g[a][a] = (-m2 + 16.0 * m1 - 30.0 * g0 + 16.0 * p1 - p2) / (12.0 * h[a] * h[a]);
    }
    // Mixed partials as nested grouped differences: exact zero for metric
    // components that do not depend on the pair of axes.
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            auto inner = [&](int ia) {
                const Mat4 m2 = at_offset(a, ia, b, -2);
                const Mat4 m1 = at_offset(a, ia, b, -1);
                const Mat4 p1 = at_offset(a, ia, b, +1);
                const Mat4 p2 = at_offset(a, ia, b, +2);
                return ((m2 - p2) + 8.0 * (p1 - m1)).eval();
            };
            const Mat4 i_m2 = inner(-2);
            const Mat4 i_m1 = inner(-1);
            const Mat4 i_p1 = inner(+1);
            const Mat4 i_p2 = inner(+2);
            d2g[a][b] = ((i_m2 - i_p2) + 8.0 * (i_p1 - i_m1)) / (144.0 * h[a] * h[b]);
            d2g[b][a] = d2g[a][b];
        }

    // Christoffel symbols of the first and second kind.
    double gamma1[4][4][4];  // gamma1[k][i][j] = (d_i g_jk + d_j g_ik - d_k g_ij)/2
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                gamma1[k][i][j] = 0.5 * (dg[i](j, k) + dg[j](i, k) - dg[k](i, j));
    const Mat4 ginv = g0.inverse();
    double gamma2[4][4][4];
    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double v = 0.0;
                for (int k = 0; k < 4; ++k) v += ginv(l, k) * gamma1[k][i][j];
                gamma2[l][i][j] = v;
            }

    // All-lower Riemann components; sign convention makes R(i,j,i,j) the
    // (unnormalized) sectional curvature, positive on the round sphere.
    AlgCurvTensor coord;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double v = 0.5 * (d2g[b][c](a, d) + d2g[a][d](b, c) -
                                      d2g[b][d](a, c) - d2g[a][c](b, d));
                    for (int nn = 0; nn < 4; ++nn)
                        for (int p = 0; p < 4; ++p)
                            v += g0(nn, p) * (gamma2[nn][b][c] * gamma2[p][a][d] -
                                              gamma2[nn][b][d] * gamma2[p][a][c]);
                    coord.at(a, b, c, d) = v;
                }

    // Orthonormal frame by Gram-Schmidt on the coordinate basis, fixed order.
    Mat4 frame = Mat4::Zero();
    for (int i = 0; i < 4; ++i) {
        Vec4 e = Vec4::Zero();
        e[i] = 1.0;
        for (int j = 0; j < i; ++j) {
            const Vec4 ej = frame.col(j);
            e -= (ej.transpose() * g0 * e)(0) * ej;
        }
        const double len2 = (e.transpose() * g0 * e)(0);
        if (!(len2 > 0.0))
            throw ValidationError("degenerate metric while building the orthonormal frame");
        frame.col(i) = e / std::sqrt(len2);
    }

    return coord.rotated(frame);
}

}  // namespace curv4
