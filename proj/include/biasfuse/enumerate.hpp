#pragma once
// Exhaustive evaluation over the 2^n outcome vectors of a system.
//
// Outcome index: bit i of the integer is y_i. The first min(n, 12) channels
// form a "low" likelihood table that is swept by the SIMD kernels; each
// assignment of the remaining "high" channels contributes one block whose
// scalar prefactors multiply the low table. Block results are combined by a
// fixed pairwise tree, so sums do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "biasfuse/errors.hpp"
#include "biasfuse/model.hpp"
#include "biasfuse/simd/kernels.hpp"

namespace biasfuse {

inline constexpr std::size_t kMaxEnumerationChannels = 24;
inline constexpr std::size_t kLowBlockChannels = 12;

/// P(y | X=0) and P(y | X=1) for every y over a channel list, built by
/// repeated doubling. Sizes are 2^channels.size().
struct LikelihoodTables {
    std::vector<double> a;
    std::vector<double> b;
};

LikelihoodTables build_likelihood_tables(std::span<const Channel> channels,
                                         const simd::KernelTable& k = simd::kernels());

/// Sum of a fixed list in a fixed pairwise order.
double pairwise_sum(std::span<const double> values) noexcept;

struct EnumerationOptions {
    std::size_t workers = 1;
    std::size_t max_channels = kMaxEnumerationChannels;
    const simd::KernelTable* kernels = nullptr;  // nullptr: runtime selection
};

class OutcomeEnumerator {
public:
    /// Throws SizeGuardError when n exceeds options.max_channels.
    OutcomeEnumerator(const SystemSpec& system, EnumerationOptions options = {});

    std::size_t n() const noexcept { return n_; }
    std::size_t low_channels() const noexcept { return low_bits_; }
    std::size_t block_count() const noexcept { return high_.a.size(); }
    std::size_t block_size() const noexcept { return low_.a.size(); }

    /// sum_y min(c0 * A(y), c1 * B(y)).
    double min_sum(double c0, double c1) const;

    /// out[y] = (c0 * A(y) < c1 * B(y)); out.size() must be 2^n.
    void less_mask(double c0, double c1, std::span<std::uint8_t> out) const;
    /// out[y] = (c1 * B(y) < c0 * A(y)).
    void greater_mask(double c0, double c1, std::span<std::uint8_t> out) const;

    /// sum_y [bits[y] == 1] * c0 * A(y) + [bits[y] == 0] * c1 * B(y).
    double masked_sum(std::span<const std::uint8_t> bits, double c0, double c1) const;

    /// sum_y A(y) and sum_y B(y).
    double total_a() const;
    double total_b() const;

private:
    template <typename BlockFn>
    double reduce_blocks(BlockFn&& fn) const;

    std::size_t n_;
    std::size_t low_bits_;
    EnumerationOptions options_;
    const simd::KernelTable* k_;
    LikelihoodTables low_;
    LikelihoodTables high_;
};

}  // namespace biasfuse
