#include <algorithm>

#include "biasfuse/simd/kernels.hpp"

namespace biasfuse::simd {
namespace {

void expand_scalar(const double* in, std::size_t len, double f0, double f1, double* out_lo,
                   double* out_hi) {
    for (std::size_t j = 0; j < len; ++j) {
        const double x = in[j];
        out_lo[j] = x * f0;
        out_hi[j] = x * f1;
    }
}

double weighted_min_sum_scalar(const double* a, const double* b, std::size_t len, double ca,
                               double cb) {
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) sum += std::min(ca * a[j], cb * b[j]);
    return sum;
}

void less_mask_scalar(const double* x, const double* y, std::size_t len, double cx, double cy,
                      std::uint8_t* out) {
    for (std::size_t j = 0; j < len; ++j) out[j] = static_cast<std::uint8_t>(cx * x[j] < cy * y[j]);
}

}  // namespace

namespace detail {
const KernelTable kScalarKernels{Isa::Scalar, expand_scalar, weighted_min_sum_scalar,
                                 less_mask_scalar};
}

}  // namespace biasfuse::simd
