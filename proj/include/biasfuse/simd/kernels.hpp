#pragma once
// Data-parallel inner loops of outcome enumeration.
//
// Every kernel exists as a scalar reference and, where the target supports
// it, an AVX2 (x86-64) or NEON (AArch64) variant. The variant is chosen once
// at runtime from CPU features; BIASFUSE_ISA=scalar|avx2|neon overrides the
// choice. expand() and less_mask() are bit-identical across variants;
// weighted_min_sum() differs only in summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace biasfuse::simd {

enum class Isa : std::uint8_t { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    // out_lo[j] = in[j] * f0, out_hi[j] = in[j] * f1; out_lo may alias in
    void (*expand)(const double* in, std::size_t len, double f0, double f1, double* out_lo,
                   double* out_hi);
    // sum_j min(ca * a[j], cb * b[j])
    double (*weighted_min_sum)(const double* a, const double* b, std::size_t len, double ca,
                               double cb);
    // out[j] = (cx * x[j] < cy * y[j])
    void (*less_mask)(const double* x, const double* y, std::size_t len, double cx, double cy,
                      std::uint8_t* out);
};

bool isa_supported(Isa isa) noexcept;
/// Best supported variant, or the BIASFUSE_ISA override when it is supported.
Isa selected_isa() noexcept;
/// Throws std::invalid_argument when the variant is not available on this CPU.
const KernelTable& kernels_for(Isa isa);
const KernelTable& kernels();

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(BIASFUSE_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(BIASFUSE_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

// Span front ends over the selected table.

inline void expand(std::span<const double> in, double f0, double f1, std::span<double> out_lo,
                   std::span<double> out_hi, const KernelTable& k = kernels()) {
    k.expand(in.data(), in.size(), f0, f1, out_lo.data(), out_hi.data());
}

inline double weighted_min_sum(std::span<const double> a, std::span<const double> b, double ca,
                               double cb, const KernelTable& k = kernels()) {
    return k.weighted_min_sum(a.data(), b.data(), a.size(), ca, cb);
}

inline void less_mask(std::span<const double> x, std::span<const double> y, double cx, double cy,
                      std::span<std::uint8_t> out, const KernelTable& k = kernels()) {
    k.less_mask(x.data(), y.data(), x.size(), cx, cy, out.data());
}

}  // namespace biasfuse::simd
