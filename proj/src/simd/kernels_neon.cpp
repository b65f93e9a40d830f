#include <arm_neon.h>

#include <algorithm>

#include "biasfuse/simd/kernels.hpp"

namespace biasfuse::simd {
namespace {

void expand_neon(const double* in, std::size_t len, double f0, double f1, double* out_lo,
                 double* out_hi) {
    const float64x2_t v0 = vdupq_n_f64(f0);
    const float64x2_t v1 = vdupq_n_f64(f1);
    std::size_t j = 0;
    for (; j + 2 <= len; j += 2) {
        const float64x2_t x = vld1q_f64(in + j);
        vst1q_f64(out_lo + j, vmulq_f64(x, v0));
        vst1q_f64(out_hi + j, vmulq_f64(x, v1));
    }
    for (; j < len; ++j) {
        const double x = in[j];
        out_lo[j] = x * f0;
        out_hi[j] = x * f1;
    }
}

double weighted_min_sum_neon(const double* a, const double* b, std::size_t len, double ca,
                             double cb) {
    const float64x2_t va = vdupq_n_f64(ca);
    const float64x2_t vb = vdupq_n_f64(cb);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
        const float64x2_t x0 = vmulq_f64(va, vld1q_f64(a + j));
        const float64x2_t y0 = vmulq_f64(vb, vld1q_f64(b + j));
        const float64x2_t x1 = vmulq_f64(va, vld1q_f64(a + j + 2));
        const float64x2_t y1 = vmulq_f64(vb, vld1q_f64(b + j + 2));
        acc0 = vaddq_f64(acc0, vminq_f64(x0, y0));
        acc1 = vaddq_f64(acc1, vminq_f64(x1, y1));
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; j < len; ++j) sum += std::min(ca * a[j], cb * b[j]);
    return sum;
}

void less_mask_neon(const double* x, const double* y, std::size_t len, double cx, double cy,
                    std::uint8_t* out) {
    const float64x2_t vx = vdupq_n_f64(cx);
    const float64x2_t vy = vdupq_n_f64(cy);
    std::size_t j = 0;
    for (; j + 2 <= len; j += 2) {
        const uint64x2_t lt =
            vcltq_f64(vmulq_f64(vx, vld1q_f64(x + j)), vmulq_f64(vy, vld1q_f64(y + j)));
        out[j] = static_cast<std::uint8_t>(vgetq_lane_u64(lt, 0) & 1);
        out[j + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(lt, 1) & 1);
    }
    for (; j < len; ++j) out[j] = static_cast<std::uint8_t>(cx * x[j] < cy * y[j]);
}

}  // namespace

namespace detail {
const KernelTable kNeonKernels{Isa::Neon, expand_neon, weighted_min_sum_neon, less_mask_neon};
}

}  // namespace biasfuse::simd
