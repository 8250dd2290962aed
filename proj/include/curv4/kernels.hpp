#pragma once

#include <cstddef>

namespace curv4::kernels {

// Batch kernels for Grassmannian sampling. Bivectors are stored as a
// structure of arrays in kPairs order: w[0] = components on e1^e2, ...
// All kernels write out[i] for i in [0,n) and read nothing else, so scalar
// and vector variants are interchangeable up to floating-point contraction.

// out[i] = sum_{p,q} q6[6*p+q] * w[p][i] * w[q][i]   (q6 symmetric, row-major)
using QuadFormFn = void (*)(const double* q6, const double* const w[6],
                            double* out, std::size_t n);

// Orthonormalizes raw pairs (u, v) in place and emits the unit bivector
// u ^ v. Degenerate pairs (norm below 1e-150) produce a zero bivector.
using OrthonormalizeFn = void (*)(double* const u[4], double* const v[4],
                                  double* const w[6], std::size_t n);

struct Kernels {
    QuadFormFn quad_form;
    OrthonormalizeFn orthonormalize;
    const char* name;
};

// Scalar reference implementations.
extern const Kernels kScalar;

// Best implementation for this process: AVX2 when the CPU supports it and
// the build enabled it, else scalar. CURV4_SIMD=scalar|avx2 overrides.
const Kernels& active();

bool avx2_compiled_in();

}  // namespace curv4::kernels
