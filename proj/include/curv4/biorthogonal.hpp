#pragma once

#include <array>
#include <cstdint>

#include "curv4/curvature_tensor.hpp"
#include "curv4/decomposition.hpp"
#include "curv4/util.hpp"

namespace curv4 {

// Oriented 2-plane given by an orthonormal pair.
struct Plane2 {
    Vec4 u = Vec4::UnitX();
    Vec4 v = Vec4::UnitY();

    // Gram-Schmidt of (a, b); throws ValidationError when degenerate.
    static Plane2 from_span(const Vec4& a, const Vec4& b);

    // max of | |u|-1 |, | |v|-1 |, |u.v|.
    double invariant_violation() const;

    // Bivector u ^ v in kPairs coordinates (unit for a valid plane).
    Vec6 bivector() const;
};

// Deterministic orthonormal basis of the orthogonal complement: Gram-Schmidt
// of the two standard basis vectors least aligned with span(u, v).
Plane2 orthogonal_plane(const Plane2& p);

// K(P) = sum R_ijkl u_i v_j u_k v_l; requires an admissible tensor.
double sectional(const AlgCurvTensor& t, const Plane2& p);

// (K(P) + K(P_perp)) / 2.
double biorthogonal_k(const AlgCurvTensor& t, const Plane2& p);

// Hodge star on 2-forms in kPairs coordinates (orientation e1^e2^e3^e4).
const Mat6& hodge_star();

// Quadratic forms on bivectors: K(P) = w^T M w with M the curvature
// operator; K_perp uses (M + *M*)/2 and the Einstein defect K_perp - K uses
// (*M* - M)/2.
Mat6 biorthogonal_form(const Mat6& m);
Mat6 defect_form(const Mat6& m);

struct BruteExtremes {
    double min = 0.0;
    double max = 0.0;
    Plane2 argmin;
    Plane2 argmax;
};

// Extremes of w^T Q w over the Grassmannian: uniform plane samples followed
// by a random-rotation polish of the best 8 candidates per side. Fully
// deterministic for a fixed seed.
BruteExtremes quadratic_extremes_brute(const Mat6& q, int samples, int polish_levels,
                                       std::uint64_t seed);

// Extremes of the biorthogonal curvature (independent oracle for the closed
// form (w1+ + w1-)/2 + s/12, (w3+ + w3-)/2 + s/12).
BruteExtremes k_extremes_brute(const AlgCurvTensor& t, int samples = 10000,
                               int polish_levels = 14, std::uint64_t seed = 0);

// max over sampled planes of |K_perp(P) - K(P)|; vanishes iff traceless
// Ricci vanishes.
double einstein_defect(const AlgCurvTensor& t, int samples = 10000, std::uint64_t seed = 0);

// Estimated sup of |sectional curvature| over all planes.
double sup_abs_sectional(const AlgCurvTensor& t, int samples = 4096, std::uint64_t seed = 0);

struct SeamanResult {
    double max_component = 0.0;  // max |R_ijkl| over frames and mixed quadruples
    double bound = 0.0;          // (2/3)(K3 - K1)
    bool pass = false;
};

// Checks |R_ijkl| <= (2/3)(K3perp - K1perp) over `frames` random orthonormal
// frames (identity first) and all index quadruples i<j, k<l, {i,j} != {k,l}.
SeamanResult seaman_check(const AlgCurvTensor& t, int frames = 64, std::uint64_t seed = 0);

// Haar-ish random rotation: Gram-Schmidt of a Gaussian matrix, det +1.
Mat4 random_rotation(Rng& rng);

}  // namespace curv4
