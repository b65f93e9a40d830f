// Compiled with -mavx2 only; called only after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "biasfuse/simd/kernels.hpp"

namespace biasfuse::simd {
namespace {

void expand_avx2(const double* in, std::size_t len, double f0, double f1, double* out_lo,
                 double* out_hi) {
    const __m256d v0 = _mm256_set1_pd(f0);
    const __m256d v1 = _mm256_set1_pd(f1);
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
        const __m256d x = _mm256_loadu_pd(in + j);
        _mm256_storeu_pd(out_lo + j, _mm256_mul_pd(x, v0));
        _mm256_storeu_pd(out_hi + j, _mm256_mul_pd(x, v1));
    }
    for (; j < len; ++j) {
        const double x = in[j];
        out_lo[j] = x * f0;
        out_hi[j] = x * f1;
    }
}

double weighted_min_sum_avx2(const double* a, const double* b, std::size_t len, double ca,
                             double cb) {
    const __m256d va = _mm256_set1_pd(ca);
    const __m256d vb = _mm256_set1_pd(cb);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= len; j += 8) {
        const __m256d x0 = _mm256_mul_pd(va, _mm256_loadu_pd(a + j));
        const __m256d y0 = _mm256_mul_pd(vb, _mm256_loadu_pd(b + j));
        const __m256d x1 = _mm256_mul_pd(va, _mm256_loadu_pd(a + j + 4));
        const __m256d y1 = _mm256_mul_pd(vb, _mm256_loadu_pd(b + j + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_min_pd(x0, y0));
        acc1 = _mm256_add_pd(acc1, _mm256_min_pd(x1, y1));
    }
    for (; j + 4 <= len; j += 4) {
        const __m256d x0 = _mm256_mul_pd(va, _mm256_loadu_pd(a + j));
        const __m256d y0 = _mm256_mul_pd(vb, _mm256_loadu_pd(b + j));
        acc0 = _mm256_add_pd(acc0, _mm256_min_pd(x0, y0));
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double sum = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; j < len; ++j) sum += std::min(ca * a[j], cb * b[j]);
    return sum;
}

void less_mask_avx2(const double* x, const double* y, std::size_t len, double cx, double cy,
                    std::uint8_t* out) {
    const __m256d vx = _mm256_set1_pd(cx);
    const __m256d vy = _mm256_set1_pd(cy);
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
        const __m256d lhs = _mm256_mul_pd(vx, _mm256_loadu_pd(x + j));
        const __m256d rhs = _mm256_mul_pd(vy, _mm256_loadu_pd(y + j));
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(lhs, rhs, _CMP_LT_OQ));
        out[j] = static_cast<std::uint8_t>(bits & 1);
        out[j + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        out[j + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        out[j + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
    }
    for (; j < len; ++j) out[j] = static_cast<std::uint8_t>(cx * x[j] < cy * y[j]);
}

}  // namespace

namespace detail {
const KernelTable kAvx2Kernels{Isa::Avx2, expand_avx2, weighted_min_sum_avx2, less_mask_avx2};
}

}  // namespace biasfuse::simd
