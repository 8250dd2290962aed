#pragma once

#include <array>

#include "curv4/curvature_tensor.hpp"

namespace curv4 {

// Irreducible pieces of a 4-dimensional curvature tensor: scalar curvature,
// traceless Ricci, and the self-dual / anti-self-dual Weyl blocks on the
// 2-form bundle, with eigenvalues sorted ascending (w1 <= w2 <= w3,
// w1 + w2 + w3 = 0 per block).
struct CurvDecomposition {
    double s = 0.0;
    Mat4 ric0 = Mat4::Zero();
    Mat3 w_plus = Mat3::Zero();
    Mat3 w_minus = Mat3::Zero();
    std::array<double, 3> eig_plus{};
    std::array<double, 3> eig_minus{};
};

// Norm conventions: |W|^2 sums squared block eigenvalues, |ric0|^2 is the
// plain tensor norm, and |Rm|^2 = s^2/24 + |W|^2 + |ric0|^2/2. This is the
// convention under which the Euler integrand
// |W+|^2 + |W-|^2 + s^2/24 - |ric0|^2/2 integrates to 8 pi^2 chi.
struct CurvNorms {
    double w2 = 0.0;
    double w2_plus = 0.0;
    double w2_minus = 0.0;
    double ric02 = 0.0;
    double rm2 = 0.0;
};

// Orthonormal basis of self-dual (+) then anti-self-dual (-) 2-forms,
// expressed in kPairs coordinates; columns 0..2 span Lambda^2_+.
const Mat6& lambda2_basis();

// Throws ValidationError if the tensor fails validate() at 1e-9.
CurvDecomposition decompose(const AlgCurvTensor& t);

CurvNorms norms(const CurvDecomposition& d);

// Rebuilds the tensor from its pieces; inverse of decompose for admissible
// input (used as the reconstruction identity check).
AlgCurvTensor recompose(const CurvDecomposition& d);

// min / max of the biorthogonal curvature over all 2-planes:
// K1 = (w1+ + w1-)/2 + s/12,  K3 = (w3+ + w3-)/2 + s/12.
std::array<double, 2> k_perp_extremes(const CurvDecomposition& d);

// Weyl functional ingredient f1 = -6 (w1+ + w1-); s - f1 = 12 K1perp.
double f1_of_weyl(const CurvDecomposition& d);

}  // namespace curv4
