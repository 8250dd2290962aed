#include "curv4/biorthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "curv4/errors.hpp"
#include "curv4/kernels.hpp"

namespace curv4 {

Plane2 Plane2::from_span(const Vec4& a, const Vec4& b) {
    const double an = a.norm();
    if (an < 1e-12) throw ValidationError("degenerate plane: zero first vector");
    Plane2 p;
    p.u = a / an;
    Vec4 w = b - b.dot(p.u) * p.u;
    const double wn = w.norm();
    if (wn < 1e-12) throw ValidationError("degenerate plane: collinear span vectors");
    p.v = w / wn;
    return p;
}

double Plane2::invariant_violation() const {
    return std::max({std::abs(u.norm() - 1.0), std::abs(v.norm() - 1.0), std::abs(u.dot(v))});
}

Vec6 Plane2::bivector() const {
    Vec6 w;
    for (int p = 0; p < 6; ++p)
        w[p] = u[kPairs[p][0]] * v[kPairs[p][1]] - u[kPairs[p][1]] * v[kPairs[p][0]];
    return w;
}

Plane2 orthogonal_plane(const Plane2& p) {
    // Pick the two standard basis vectors least aligned with span(u, v),
    // stable index order on ties.
    std::array<double, 4> align;
    for (int i = 0; i < 4; ++i)
        align[i] = p.u[i] * p.u[i] + p.v[i] * p.v[i];
    int first = 0, second = 1;
    for (int i = 1; i < 4; ++i)
        if (align[i] < align[first]) first = i;
    second = first == 0 ? 1 : 0;
    for (int i = 0; i < 4; ++i)
        if (i != first && align[i] < align[second]) second = i;
    if (second < first) std::swap(first, second);

    auto project_out = [&p](Vec4 w) {
        w -= w.dot(p.u) * p.u;
        w -= w.dot(p.v) * p.v;
        return w;
    };
    Vec4 a = project_out(Vec4::Unit(first));
    a /= a.norm();
    Vec4 b = project_out(Vec4::Unit(second));
    b -= b.dot(a) * a;
    b /= b.norm();
    return Plane2{a, b};
}

double sectional(const AlgCurvTensor& t, const Plane2& p) {
    if (p.invariant_violation() > 1e-10)
        throw ValidationError("plane basis is not orthonormal");
    const Vec6 w = p.bivector();
    return w.dot(t.operator_matrix() * w);
}

double biorthogonal_k(const AlgCurvTensor& t, const Plane2& p) {
    if (p.invariant_violation() > 1e-10)
        throw ValidationError("plane basis is not orthonormal");
    const Vec6 w = p.bivector();
    return w.dot(biorthogonal_form(t.operator_matrix()) * w);
}

const Mat6& hodge_star() {
    static const Mat6 s = [] {
        Mat6 m = Mat6::Zero();
        // *(e1^e2) = e3^e4, *(e1^e3) = -e2^e4, *(e1^e4) = e2^e3, symmetric.
        m(0, 5) = 1; m(5, 0) = 1;
        m(1, 4) = -1; m(4, 1) = -1;
        m(2, 3) = 1; m(3, 2) = 1;
        return m;
    }();
    return s;
}

Mat6 biorthogonal_form(const Mat6& m) {
    const Mat6& s = hodge_star();
    return 0.5 * (m + s * m * s);
}

Mat6 defect_form(const Mat6& m) {
    const Mat6& s = hodge_star();
    return 0.5 * (s * m * s - m);
}

namespace {

// Structure-of-arrays batch of candidate planes.
struct PlaneBatch {
    std::vector<double> u[4], v[4], w[6], val;

    void resize(std::size_t n) {
        for (auto& c : u) c.resize(n);
        for (auto& c : v) c.resize(n);
        for (auto& c : w) c.resize(n);
        val.resize(n);
    }

    std::size_t size() const { return val.size(); }

    void fill_gaussian(Rng& rng) {
        for (std::size_t i = 0; i < size(); ++i) {
            for (auto& c : u) c[i] = rng.gaussian();
            for (auto& c : v) c[i] = rng.gaussian();
        }
    }

    void evaluate(const double* q6) {
        const auto& k = kernels::active();
        double* up[4] = {u[0].data(), u[1].data(), u[2].data(), u[3].data()};
        double* vp[4] = {v[0].data(), v[1].data(), v[2].data(), v[3].data()};
        double* wp[6] = {w[0].data(), w[1].data(), w[2].data(),
                         w[3].data(), w[4].data(), w[5].data()};
        k.orthonormalize(up, vp, wp, size());
        k.quad_form(q6, wp, val.data(), size());
    }

    Plane2 plane(std::size_t i) const {
        Plane2 p;
        p.u = Vec4(u[0][i], u[1][i], u[2][i], u[3][i]);
        p.v = Vec4(v[0][i], v[1][i], v[2][i], v[3][i]);
        return p;
    }
};

struct Candidate {
    Plane2 plane;
    double value;
};

// Random-rotation descent: perturb the spanning pair, re-orthonormalize,
// accept improvements. step halves per level.
Candidate polish(const double* q6, Candidate c, int levels, int sign, Rng& rng) {
    constexpr std::size_t kTrials = 64;
    PlaneBatch batch;
    batch.resize(kTrials);
    for (int level = 0; level < levels; ++level) {
        const double step = 0.1 * std::pow(0.5, level);
        for (std::size_t i = 0; i < kTrials; ++i) {
            for (int a = 0; a < 4; ++a) {
                batch.u[a][i] = c.plane.u[a] + step * rng.gaussian();
                batch.v[a][i] = c.plane.v[a] + step * rng.gaussian();
            }
        }
        batch.evaluate(q6);
        std::size_t best = 0;
        for (std::size_t i = 1; i < kTrials; ++i)
            if (sign * batch.val[i] > sign * batch.val[best]) best = i;
        if (sign * batch.val[best] > sign * c.value) {
            c.plane = batch.plane(best);
            c.value = batch.val[best];
        }
    }
    return c;
}

}  // namespace

BruteExtremes quadratic_extremes_brute(const Mat6& q, int samples, int polish_levels,
                                       std::uint64_t seed) {
    double q6[36];
    for (int p = 0; p < 6; ++p)
        for (int r = 0; r < 6; ++r) q6[6 * p + r] = q(p, r);

    Rng rng(derive_seed(seed, 0x42525554));
    PlaneBatch batch;
    batch.resize(static_cast<std::size_t>(std::max(samples, 16)));
    batch.fill_gaussian(rng);
    batch.evaluate(q6);

    // Best 8 candidates per side.
    constexpr int kKeep = 8;
    auto top_indices = [&batch](int sign) {
        std::vector<std::size_t> idx(batch.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::partial_sort(idx.begin(), idx.begin() + kKeep, idx.end(),
                          [&batch, sign](std::size_t a, std::size_t b) {
                              return sign * batch.val[a] > sign * batch.val[b];
                          });
        idx.resize(kKeep);
        return idx;
    };

    BruteExtremes out;
    for (int sign : {+1, -1}) {
        Candidate best{};
        bool have = false;
        for (std::size_t i : top_indices(sign)) {
            Candidate c{batch.plane(i), batch.val[i]};
            c = polish(q6, c, polish_levels, sign, rng);
            if (!have || sign * c.value > sign * best.value) {
                best = c;
                have = true;
            }
        }
        if (sign > 0) {
            out.max = best.value;
            out.argmax = best.plane;
        } else {
            out.min = best.value;
            out.argmin = best.plane;
        }
    }
    return out;
}

BruteExtremes k_extremes_brute(const AlgCurvTensor& t, int samples, int polish_levels,
                               std::uint64_t seed) {
    if (samples < 1000)
        throw ValidationError("brute-force plane search needs at least 1000 samples");
    return quadratic_extremes_brute(biorthogonal_form(t.operator_matrix()), samples,
                                    polish_levels, seed);
}

double einstein_defect(const AlgCurvTensor& t, int samples, std::uint64_t seed) {
    if (samples < 1000)
        throw ValidationError("brute-force plane search needs at least 1000 samples");
    const BruteExtremes e =
        quadratic_extremes_brute(defect_form(t.operator_matrix()), samples, 12, seed);
    return std::max(std::abs(e.min), std::abs(e.max));
}

double sup_abs_sectional(const AlgCurvTensor& t, int samples, std::uint64_t seed) {
    const BruteExtremes e = quadratic_extremes_brute(t.operator_matrix(), samples, 24, seed);
    return std::max(std::abs(e.min), std::abs(e.max));
}

SeamanResult seaman_check(const AlgCurvTensor& t, int frames, std::uint64_t seed) {
    const CurvDecomposition dec = decompose(t);
    const auto [k1, k3] = k_perp_extremes(dec);

    SeamanResult r;
    r.bound = 2.0 / 3.0 * (k3 - k1);

    // Components with four distinct indices: pairs (12|34), (13|24), (14|23).
    // Only these are pure Weyl contributions; components sharing an index
    // pick up traceless-Ricci terms and can exceed the bound (the canonical
    // circle-times-3-sphere metric is the counterexample).
    static constexpr int kDisjoint[3][2] = {{0, 5}, {1, 4}, {2, 3}};
    Rng rng(derive_seed(seed, 0x5345414d));
    for (int f = 0; f < frames; ++f) {
        const AlgCurvTensor rt = f == 0 ? t : t.rotated(random_rotation(rng));
        for (const auto& [p, q] : kDisjoint)
            r.max_component = std::max(
                r.max_component,
                std::abs(rt(kPairs[p][0], kPairs[p][1], kPairs[q][0], kPairs[q][1])));
    }
    const double scale = std::sqrt(t.quarter_norm_sq());
    r.pass = r.max_component <= r.bound + 1e-9 * (1.0 + scale);
    return r;
}

Mat4 random_rotation(Rng& rng) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = rng.gaussian();
    // Gram-Schmidt columns.
    for (int c = 0; c < 4; ++c) {
        for (int p = 0; p < c; ++p) m.col(c) -= m.col(p).dot(m.col(c)) * m.col(p);
        m.col(c).normalize();
    }
    if (m.determinant() < 0) m.col(3) = -m.col(3);
    return m;
}

}  // namespace curv4
