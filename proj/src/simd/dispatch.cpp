#include <cstdlib>
#include <stdexcept>
#include <string>

#include "biasfuse/simd/kernels.hpp"

namespace biasfuse::simd {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(BIASFUSE_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(BIASFUSE_HAVE_NEON)
            return true;  // mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

namespace {

Isa detect() noexcept {
    if (const char* env = std::getenv("BIASFUSE_ISA")) {
        const std::string_view want(env);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == isa_name(isa) && isa_supported(isa)) return isa;
        }
    }
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

Isa selected_isa() noexcept {
    static const Isa isa = detect();
    return isa;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa))
        throw std::invalid_argument("kernel variant not supported on this CPU: " +
                                    std::string(isa_name(isa)));
    switch (isa) {
#if defined(BIASFUSE_HAVE_AVX2)
        case Isa::Avx2: return detail::kAvx2Kernels;
#endif
#if defined(BIASFUSE_HAVE_NEON)
        case Isa::Neon: return detail::kNeonKernels;
#endif
        default: return detail::kScalarKernels;
    }
}

const KernelTable& kernels() {
    static const KernelTable& table = kernels_for(selected_isa());
    return table;
}

}  // namespace biasfuse::simd
