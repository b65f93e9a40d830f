#pragma once
// Counter-based SplitMix64 generator.
//
// Draw k of stream `key` is mix64(key + (k + 1) * golden_gamma), which is
// exactly the k-th output of a SplitMix64 sequence seeded with `key`. Because
// any draw can be computed from (key, k) alone, a trial range can be split
// across workers without changing a single value.

#include <cstdint>

namespace biasfuse {

class CounterRng {
public:
    static constexpr const char* kName = "splitmix64-counter";
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * kGamma);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Independent stream for a sub-task (e.g. one sampled system).
    constexpr CounterRng split(std::uint64_t stream) const noexcept {
        return CounterRng(mix64(key_ ^ mix64(stream + kGamma)));
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

}  // namespace biasfuse
