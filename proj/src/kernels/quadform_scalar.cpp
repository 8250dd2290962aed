#include <cmath>
#include <cstddef>

#include "curv4/kernels.hpp"

namespace curv4::kernels {

namespace {

void quad_form_scalar(const double* q6, const double* const w[6], double* out,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double wv[6] = {w[0][i], w[1][i], w[2][i], w[3][i], w[4][i], w[5][i]};
        double acc = 0.0;
        for (int p = 0; p < 6; ++p) {
            double t = 0.0;
            for (int q = 0; q < 6; ++q) t += q6[6 * p + q] * wv[q];
            acc += wv[p] * t;
        }
        out[i] = acc;
    }
}

void orthonormalize_scalar(double* const u[4], double* const v[4],
                           double* const w[6], std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double a0 = u[0][i], a1 = u[1][i], a2 = u[2][i], a3 = u[3][i];
        double b0 = v[0][i], b1 = v[1][i], b2 = v[2][i], b3 = v[3][i];

        const double un2 = a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3;
        const double ui = un2 > 1e-300 ? 1.0 / std::sqrt(un2) : 0.0;
        a0 *= ui; a1 *= ui; a2 *= ui; a3 *= ui;

        const double d = a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3;
        b0 -= d * a0; b1 -= d * a1; b2 -= d * a2; b3 -= d * a3;
        const double vn2 = b0 * b0 + b1 * b1 + b2 * b2 + b3 * b3;
        const double vi = vn2 > 1e-300 ? 1.0 / std::sqrt(vn2) : 0.0;
        b0 *= vi; b1 *= vi; b2 *= vi; b3 *= vi;

        u[0][i] = a0; u[1][i] = a1; u[2][i] = a2; u[3][i] = a3;
        v[0][i] = b0; v[1][i] = b1; v[2][i] = b2; v[3][i] = b3;

        w[0][i] = a0 * b1 - a1 * b0;
        w[1][i] = a0 * b2 - a2 * b0;
        w[2][i] = a0 * b3 - a3 * b0;
        w[3][i] = a1 * b2 - a2 * b1;
        w[4][i] = a1 * b3 - a3 * b1;
        w[5][i] = a2 * b3 - a3 * b2;
    }
}

}  // namespace

const Kernels kScalar = {quad_form_scalar, orthonormalize_scalar, "scalar"};

}  // namespace curv4::kernels
