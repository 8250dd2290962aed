#include "curv4/topology.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

constexpr double kPi = std::numbers::pi;

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;

    Quat normalized() const {
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        return {w / n, x / n, y / n, z / n};
    }
    Quat conj() const { return {w, -x, -y, -z}; }
};

Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat random_quat(Rng& rng) {
    return Quat{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()}.normalized();
}

// SO(4) from a unit quaternion pair: x -> q x conj(p), basis (1, i, j, k).
Mat4 rotation_from_pair(const Quat& q, const Quat& p) {
    Mat4 m;
    const Quat pc = p.conj();
    const Quat basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int j = 0; j < 4; ++j) {
        const Quat c = q * (basis[j] * pc);
        m(0, j) = c.w;
        m(1, j) = c.x;
        m(2, j) = c.y;
        m(3, j) = c.z;
    }
    return m;
}

Quat quat_from_rotation3(const Mat3& r) {
    Quat q;
    const double tr = r.trace();
    if (tr > 0) {
        double s = std::sqrt(tr + 1.0) * 2;
        q.w = 0.25 * s;
        q.x = (r(2, 1) - r(1, 2)) / s;
        q.y = (r(0, 2) - r(2, 0)) / s;
        q.z = (r(1, 0) - r(0, 1)) / s;
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2;
        q.w = (r(2, 1) - r(1, 2)) / s;
        q.x = 0.25 * s;
        q.y = (r(0, 1) + r(1, 0)) / s;
        q.z = (r(0, 2) + r(2, 0)) / s;
    } else if (r(1, 1) > r(2, 2)) {
        double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2;
        q.w = (r(0, 2) - r(2, 0)) / s;
        q.x = (r(0, 1) + r(1, 0)) / s;
        q.y = 0.25 * s;
        q.z = (r(1, 2) + r(2, 1)) / s;
    } else {
        double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2;
        q.w = (r(1, 0) - r(0, 1)) / s;
        q.x = (r(0, 2) + r(2, 0)) / s;
        q.y = (r(1, 2) + r(2, 1)) / s;
        q.z = 0.25 * s;
    }
    return q.normalized();
}

// Isoclinic factorization Q(q, p) of a rotation matrix. r = q conj(p) is the
// image of 1; conj(r) * Q fixes 1 and rotates span(i,j,k) by p.
void pair_from_rotation(const Mat4& m, Quat& q, Quat& p) {
    const Quat r = Quat{m(0, 0), m(1, 0), m(2, 0), m(3, 0)}.normalized();
    const Mat4 lr = rotation_from_pair(r.conj(), Quat{1, 0, 0, 0});
    const Mat4 s = lr * m;  // x -> p x conj(p)
    p = quat_from_rotation3(s.bottomRightCorner<3, 3>());
    q = (r * p).normalized();
}

// The six special-basis components in the frame whose columns are rot.
using Resid6 = Eigen::Matrix<double, 6, 1>;

Resid6 bg_components(const Mat6& m, const Mat4& rot) {
    // Induced map on 2-forms, columns for the pairs we contract against.
    Vec6 col[5];
    for (int pcol = 0; pcol < 5; ++pcol) {
        const int i = kPairs[pcol][0], j = kPairs[pcol][1];
        for (int row = 0; row < 6; ++row) {
            const int a = kPairs[row][0], b = kPairs[row][1];
            col[pcol][row] = rot(a, i) * rot(b, j) - rot(b, i) * rot(a, j);
        }
    }
    const Vec6 t = m * col[0];
    const Vec6 u = m * col[1];
    Resid6 r;
    r[0] = t.dot(col[1]);  // R'_1213
    r[1] = t.dot(col[2]);  // R'_1214
    r[2] = t.dot(col[3]);  // R'_1223
    r[3] = t.dot(col[4]);  // R'_1224
    r[4] = u.dot(col[2]);  // R'_1314
    r[5] = u.dot(col[3]);  // R'_1323
    return r;
}

double bg_residual_sq(const Mat6& m, const Mat4& rot) {
    return bg_components(m, rot).squaredNorm();
}

// Re-orthonormalized Q * exp(sum_k t_k G_k) for the so(4) generators.
Mat4 rotate_by_tangent(const Mat4& q, const Eigen::Matrix<double, 6, 1>& t) {
    Mat4 a = Mat4::Zero();
    for (int k = 0; k < 6; ++k) {
        a(kPairs[k][0], kPairs[k][1]) += t[k];
        a(kPairs[k][1], kPairs[k][0]) -= t[k];
    }
    Mat4 e = Mat4::Identity() + a + 0.5 * a * a + (1.0 / 6.0) * a * a * a;
    Mat4 out = q * e;
    for (int c = 0; c < 4; ++c) {
        for (int p = 0; p < c; ++p) out.col(c) -= out.col(p).dot(out.col(c)) * out.col(p);
        out.col(c).normalize();
    }
    return out;
}

// Damped Gauss-Newton on the six components over SO(4); quadratic near a
// regular zero, which the random descent alone often is not.
Mat4 gauss_newton_polish(const Mat6& m, Mat4 q, int iters) {
    const double eps = 1e-7;
    Resid6 f = bg_components(m, q);
    for (int iter = 0; iter < iters; ++iter) {
        if (f.squaredNorm() == 0.0) break;
        Eigen::Matrix<double, 6, 6> jac;
        for (int k = 0; k < 6; ++k) {
            Eigen::Matrix<double, 6, 1> t = Eigen::Matrix<double, 6, 1>::Zero();
            t[k] = eps;
            jac.col(k) = (bg_components(m, rotate_by_tangent(q, t)) - f) / eps;
        }
        const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
        const double mu = 1e-12 * jtj.trace() + 1e-300;
        Eigen::Matrix<double, 6, 1> step =
            (jtj + mu * Eigen::Matrix<double, 6, 6>::Identity())
                .ldlt()
                .solve(-jac.transpose() * f);
        // backtracking on the residual norm
        bool accepted = false;
        for (int half = 0; half < 12; ++half) {
            const Mat4 cand = rotate_by_tangent(q, step);
            const Resid6 fc = bg_components(m, cand);
            if (fc.squaredNorm() < f.squaredNorm()) {
                q = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return q;
}

}  // namespace

BGFrameResult bg_basis_search(const AlgCurvTensor& t, std::uint64_t seed) {
    const Mat6 m = t.operator_matrix();
    const double scale = std::sqrt(t.quarter_norm_sq());
    const double threshold = 1e-7 * (1.0 + scale);
    const double target = 0.02 * threshold;

    struct State {
        Quat q, p;
        double res_sq;
    };
    auto eval = [&m](const Quat& q, const Quat& p) {
        return bg_residual_sq(m, rotation_from_pair(q, p));
    };

    double best_res_sq = bg_residual_sq(m, Mat4::Identity());
    Mat4 best_rot = Mat4::Identity();
    bool identity_kept = true;

    if (best_res_sq > target * target) {
        // Starts: the frame of a biorthogonal-maximizing plane (the classical
        // construction puts the critical frame there), then random pairs.
        // Each start runs a coarse random descent and a Gauss-Newton finish.
        constexpr int kStarts = 16;
        constexpr int kLevels = 14;
        constexpr int kTrials = 32;
        for (int start = 0; start < kStarts && best_res_sq > target * target; ++start) {
            Rng rng(derive_seed(seed, 0xb9000 + static_cast<std::uint64_t>(start)));
            State cur;
            if (start == 0) {
                const BruteExtremes ext =
                    quadratic_extremes_brute(biorthogonal_form(m), 512, 8, seed);
                Mat4 frame;
                const Plane2 perp = orthogonal_plane(ext.argmax);
                frame.col(0) = ext.argmax.u;
                frame.col(1) = ext.argmax.v;
                frame.col(2) = perp.u;
                frame.col(3) = perp.v;
                if (frame.determinant() < 0) frame.col(3) = -frame.col(3);
                pair_from_rotation(frame, cur.q, cur.p);
            } else {
                cur.q = random_quat(rng);
                cur.p = random_quat(rng);
            }
            cur.res_sq = eval(cur.q, cur.p);
            for (int level = 0; level < kLevels; ++level) {
                const double step = 0.4 * std::pow(0.5, level);
                for (int trial = 0; trial < kTrials; ++trial) {
                    const Quat q2 = Quat{cur.q.w + step * rng.gaussian(),
                                         cur.q.x + step * rng.gaussian(),
                                         cur.q.y + step * rng.gaussian(),
                                         cur.q.z + step * rng.gaussian()}
                                        .normalized();
                    const Quat p2 = Quat{cur.p.w + step * rng.gaussian(),
                                         cur.p.x + step * rng.gaussian(),
                                         cur.p.y + step * rng.gaussian(),
                                         cur.p.z + step * rng.gaussian()}
                                        .normalized();
                    const double v = eval(q2, p2);
                    if (v < cur.res_sq) {
                        cur.q = q2;
                        cur.p = p2;
                        cur.res_sq = v;
                    }
                }
            }
            const Mat4 polished =
                gauss_newton_polish(m, rotation_from_pair(cur.q, cur.p), 40);
            const double res = bg_residual_sq(m, polished);
            if (res < best_res_sq) {
                best_res_sq = res;
                best_rot = polished;
                identity_kept = false;
            }
        }
    }

    BGFrameResult out;
    out.rotation = identity_kept ? Mat4::Identity() : best_rot;
    out.residual = std::sqrt(best_res_sq);
    out.threshold = threshold;
    out.pass = out.residual < threshold;
    out.rotated_tensor = t.rotated(out.rotation);
    return out;
}

double euler_density(const CurvNorms& n) {
    // |W|^2 + s^2/24 - |ric0|^2/2, written through rm2 = s^2/24 + |W|^2 + |ric0|^2/2.
    return n.rm2 - n.ric02;
}

double signature_density(const CurvNorms& n) { return n.w2_plus - n.w2_minus; }

double signature_density_components(const AlgCurvTensor& t) {
    const Mat6 m = t.operator_matrix();
    double sum = 0.0;
    for (int p = 0; p < 6; ++p)
        sum += m(p, 0) * m(p, 5) - m(p, 1) * m(p, 4) + m(p, 2) * m(p, 3);
    return sum;
}

double gray_integrand(const Mat6& m) {
    return (m(0, 0) + m(5, 5)) * m(0, 5) - (m(1, 1) + m(4, 4)) * m(1, 4) +
           (m(2, 2) + m(3, 3)) * m(2, 3) + m(2, 4) * m(3, 4) + m(2, 5) * m(3, 5) -
           m(1, 5) * m(4, 5);
}

double bg_euler_integrand(const Mat6& m) {
    return m(0, 0) * m(5, 5) + m(1, 1) * m(4, 4) + m(2, 2) * m(3, 3) +
           m(0, 5) * m(0, 5) + m(1, 4) * m(1, 4) + m(2, 3) * m(2, 3);
}

double k_difference_density(const Mat6& m) {
    const double a = m(0, 0) - m(5, 5);
    const double b = m(1, 1) - m(4, 4);
    const double c = m(2, 2) - m(3, 3);
    return -0.25 * (a * a + b * b + c * c);
}

namespace {

TopoIntegral integral_of(const MetricChart& chart, const std::array<int, 4>& n,
                         const FieldFn& density, double divisor, std::uint64_t seed) {
    PassOptions opts;
    opts.seed = seed;
    opts.sup_probes = 0;
    const PassResult pass = evaluate_fields(chart, n, {density}, opts);
    TopoIntegral out;
    out.raw = pass.fields[0].integral / divisor;
    out.snapped = static_cast<int>(std::lround(out.raw));
    out.snapped_ok = std::abs(out.raw - out.snapped) <= 1e-4;
    out.integrand_min = pass.fields[0].min;
    out.integrand_max = pass.fields[0].max;
    return out;
}

}  // namespace

TopoIntegral gauss_bonnet_chi(const MetricChart& chart, const std::array<int, 4>& n,
                              std::uint64_t seed) {
    return integral_of(
        chart, n, [](const PointSample& s) { return euler_density(s.norms); },
        8.0 * kPi * kPi, seed);
}

TopoIntegral hirzebruch_tau(const MetricChart& chart, const std::array<int, 4>& n,
                            std::uint64_t seed) {
    return integral_of(
        chart, n, [](const PointSample& s) { return signature_density(s.norms); },
        12.0 * kPi * kPi, seed);
}

namespace {

TopoIntegral bg_formula_integral(const MetricChart& chart, const std::array<int, 4>& n,
                                 double (*integrand)(const Mat6&), double divisor,
                                 std::uint64_t seed) {
    std::atomic<double> res_max{0.0};
    auto density = [seed, integrand, &res_max](const PointSample& s) {
        const BGFrameResult bg = bg_basis_search(s.tensor, seed);
        if (!bg.pass)
            throw ConvergenceError("special-basis search failed: residual " +
                                   std::to_string(bg.residual) + " above threshold " +
                                   std::to_string(bg.threshold));
        double seen = res_max.load();
        while (seen < bg.residual && !res_max.compare_exchange_weak(seen, bg.residual)) {
        }
        return integrand(bg.rotated_tensor.operator_matrix());
    };
    TopoIntegral out = integral_of(chart, n, density, divisor, seed);
    out.bg_residual_max = res_max.load();
    return out;
}

}  // namespace

TopoIntegral gray_signature_tau(const MetricChart& chart, const std::array<int, 4>& n,
                                std::uint64_t seed) {
    return bg_formula_integral(chart, n, gray_integrand, 6.0 * kPi * kPi, seed);
}

TopoIntegral bg_euler_chi(const MetricChart& chart, const std::array<int, 4>& n,
                          std::uint64_t seed) {
    return bg_formula_integral(chart, n, bg_euler_integrand, 4.0 * kPi * kPi, seed);
}

}  // namespace curv4
