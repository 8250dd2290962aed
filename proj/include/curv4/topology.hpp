#pragma once

#include <array>
#include <cstdint>

#include "curv4/biorthogonal.hpp"
#include "curv4/quadrature.hpp"

namespace curv4 {

// Frame in which the six components R_1213, R_1214, R_1223, R_1224, R_1314,
// R_1323 vanish (such a frame exists for every algebraic curvature tensor).
struct BGFrameResult {
    Mat4 rotation = Mat4::Identity();
    double residual = 0.0;   // root-sum-square of the six components
    double threshold = 0.0;  // acceptance level 1e-7 (1 + |Rm|)
    bool pass = false;
    AlgCurvTensor rotated_tensor;
};

// Minimizes the six-component residual over SO(4), parameterized by unit
// quaternion pairs; multi-start derivative-free descent with deterministic
// seeds (identity and a biorthogonal-maximizing frame are tried first).
BGFrameResult bg_basis_search(const AlgCurvTensor& t, std::uint64_t seed = 0);

struct TopoIntegral {
    double raw = 0.0;
    int snapped = 0;
    bool snapped_ok = false;  // |raw - snapped| <= 1e-4
    double integrand_min = 0.0;
    double integrand_max = 0.0;
    double bg_residual_max = 0.0;  // only for the BG-basis formulas
};

// chi from the Euler integrand |W+|^2 + |W-|^2 + s^2/24 - |ric0|^2/2 over
// 8 pi^2, tau from (|W+|^2 - |W-|^2) over 12 pi^2.
TopoIntegral gauss_bonnet_chi(const MetricChart& chart, const std::array<int, 4>& n,
                              std::uint64_t seed = 0);
TopoIntegral hirzebruch_tau(const MetricChart& chart, const std::array<int, 4>& n,
                            std::uint64_t seed = 0);

// Signature and Euler characteristic through the special-basis component
// formulas; throws ConvergenceError if the BG search fails at any node.
TopoIntegral gray_signature_tau(const MetricChart& chart, const std::array<int, 4>& n,
                                std::uint64_t seed = 0);
TopoIntegral bg_euler_chi(const MetricChart& chart, const std::array<int, 4>& n,
                          std::uint64_t seed = 0);

// Pointwise densities (integrands before the 8pi^2 / 12pi^2 / ... division).
double euler_density(const CurvNorms& n);
double signature_density(const CurvNorms& n);

// Basis-free component form of the signature density: equals
// (|W+|^2 - |W-|^2)/2 for every admissible tensor in every frame.
double signature_density_components(const AlgCurvTensor& t);

// Special-basis integrands, evaluated on a curvature operator matrix that is
// already in a BG frame.
double gray_integrand(const Mat6& m);
double bg_euler_integrand(const Mat6& m);

// min(0-clamped) ingredient of the chi <= 0 volume estimate:
// -1/4 [ (K12-K34)^2 + (K13-K24)^2 + (K14-K23)^2 ].
double k_difference_density(const Mat6& m);

}  // namespace curv4
