// AVX2 variants of the sampling kernels. This translation unit is compiled
// with -mavx2 -mfma; callers must go through kernels::active(), which only
// hands these out after a cpuid check.

#include "curv4/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace curv4::kernels {

extern const Kernels kAvx2;

namespace {

void quad_form_avx2(const double* q6, const double* const w[6], double* out,
                    std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wv[6];
        for (int p = 0; p < 6; ++p) wv[p] = _mm256_loadu_pd(w[p] + i);
        __m256d acc = _mm256_setzero_pd();
        for (int p = 0; p < 6; ++p) {
            __m256d t = _mm256_mul_pd(_mm256_set1_pd(q6[6 * p]), wv[0]);
            for (int q = 1; q < 6; ++q)
                t = _mm256_fmadd_pd(_mm256_set1_pd(q6[6 * p + q]), wv[q], t);
            acc = _mm256_fmadd_pd(wv[p], t, acc);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    // scalar tail
    for (; i < n; ++i) {
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

void orthonormalize_avx2(double* const u[4], double* const v[4],
                         double* const w[6], std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(1e-300);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a[4], b[4];
        for (int k = 0; k < 4; ++k) {
            a[k] = _mm256_loadu_pd(u[k] + i);
            b[k] = _mm256_loadu_pd(v[k] + i);
        }
        __m256d un2 = _mm256_mul_pd(a[0], a[0]);
        for (int k = 1; k < 4; ++k) un2 = _mm256_fmadd_pd(a[k], a[k], un2);
        __m256d umask = _mm256_cmp_pd(un2, tiny, _CMP_GT_OQ);
        __m256d ui = _mm256_and_pd(_mm256_div_pd(one, _mm256_sqrt_pd(un2)), umask);
        for (int k = 0; k < 4; ++k) a[k] = _mm256_mul_pd(a[k], ui);

        __m256d d = _mm256_mul_pd(a[0], b[0]);
        for (int k = 1; k < 4; ++k) d = _mm256_fmadd_pd(a[k], b[k], d);
        for (int k = 0; k < 4; ++k) b[k] = _mm256_fnmadd_pd(d, a[k], b[k]);

        __m256d vn2 = _mm256_mul_pd(b[0], b[0]);
        for (int k = 1; k < 4; ++k) vn2 = _mm256_fmadd_pd(b[k], b[k], vn2);
        __m256d vmask = _mm256_cmp_pd(vn2, tiny, _CMP_GT_OQ);
        __m256d vi = _mm256_and_pd(_mm256_div_pd(one, _mm256_sqrt_pd(vn2)), vmask);
        for (int k = 0; k < 4; ++k) b[k] = _mm256_mul_pd(b[k], vi);

        for (int k = 0; k < 4; ++k) {
            _mm256_storeu_pd(u[k] + i, a[k]);
            _mm256_storeu_pd(v[k] + i, b[k]);
        }

        _mm256_storeu_pd(w[0] + i, _mm256_fmsub_pd(a[0], b[1], _mm256_mul_pd(a[1], b[0])));
        _mm256_storeu_pd(w[1] + i, _mm256_fmsub_pd(a[0], b[2], _mm256_mul_pd(a[2], b[0])));
        _mm256_storeu_pd(w[2] + i, _mm256_fmsub_pd(a[0], b[3], _mm256_mul_pd(a[3], b[0])));
        _mm256_storeu_pd(w[3] + i, _mm256_fmsub_pd(a[1], b[2], _mm256_mul_pd(a[2], b[1])));
        _mm256_storeu_pd(w[4] + i, _mm256_fmsub_pd(a[1], b[3], _mm256_mul_pd(a[3], b[1])));
        _mm256_storeu_pd(w[5] + i, _mm256_fmsub_pd(a[2], b[3], _mm256_mul_pd(a[3], b[2])));
    }
    if (i < n) {
        double* uu[4] = {u[0] + i, u[1] + i, u[2] + i, u[3] + i};
        double* vv[4] = {v[0] + i, v[1] + i, v[2] + i, v[3] + i};
        double* ww[6] = {w[0] + i, w[1] + i, w[2] + i, w[3] + i, w[4] + i, w[5] + i};
        kScalar.orthonormalize(uu, vv, ww, n - i);
    }
}

}  // namespace

const Kernels kAvx2 = {quad_form_avx2, orthonormalize_avx2, "avx2"};
bool avx2_compiled_in() { return true; }

}  // namespace curv4::kernels

#else

namespace curv4::kernels {
extern const Kernels kAvx2;
const Kernels kAvx2 = {nullptr, nullptr, "avx2-unavailable"};
bool avx2_compiled_in() { return false; }
}  // namespace curv4::kernels

#endif
