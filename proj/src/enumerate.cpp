#include "biasfuse/enumerate.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "biasfuse/errors.hpp"

namespace biasfuse {

LikelihoodTables build_likelihood_tables(std::span<const Channel> channels,
                                         const simd::KernelTable& k) {
    const std::size_t size = std::size_t{1} << channels.size();
    LikelihoodTables t{std::vector<double>(size), std::vector<double>(size)};
    t.a[0] = 1.0;
    t.b[0] = 1.0;
    std::size_t len = 1;
    // Channel i decides bit i: entries [len, 2*len) have y_i = 1. Expanding
    // in place is safe because out_lo aliases in element-for-element.
    for (const Channel& c : channels) {
        k.expand(t.a.data(), len, 1.0 - c.alpha, c.alpha, t.a.data(), t.a.data() + len);
        k.expand(t.b.data(), len, c.beta, 1.0 - c.beta, t.b.data(), t.b.data() + len);
        len *= 2;
    }
    return t;
}

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

OutcomeEnumerator::OutcomeEnumerator(const SystemSpec& system, EnumerationOptions options)
    : n_(system.n()), options_(options) {
    if (n_ > options_.max_channels)
        throw SizeGuardError("enumeration over 2^" + std::to_string(n_) +
                             " outcomes exceeds the limit of n <= " +
                             std::to_string(options_.max_channels));
    k_ = options_.kernels ? options_.kernels : &simd::kernels();
    low_bits_ = std::min(n_, kLowBlockChannels);
    const auto channels = system.channels();
    low_ = build_likelihood_tables(channels.first(low_bits_), *k_);
    high_ = build_likelihood_tables(channels.subspan(low_bits_), *k_);
}

template <typename BlockFn>
double OutcomeEnumerator::reduce_blocks(BlockFn&& fn) const {
    const std::size_t blocks = block_count();
    std::vector<double> partial(blocks);
    const std::size_t workers = std::clamp<std::size_t>(options_.workers, 1, blocks);
    if (workers == 1) {
        for (std::size_t h = 0; h < blocks; ++h) partial[h] = fn(h);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t h = w; h < blocks; h += workers) partial[h] = fn(h);
            });
        }
    }
    return pairwise_sum(partial);
}

double OutcomeEnumerator::min_sum(double c0, double c1) const {
    return reduce_blocks([&](std::size_t h) {
        return k_->weighted_min_sum(low_.a.data(), low_.b.data(), block_size(), c0 * high_.a[h],
                                    c1 * high_.b[h]);
    });
}

void OutcomeEnumerator::less_mask(double c0, double c1, std::span<std::uint8_t> out) const {
    if (out.size() != (std::size_t{1} << n_))
        throw std::invalid_argument("decision table size must be 2^n");
    const std::size_t len = block_size();
    for (std::size_t h = 0; h < block_count(); ++h) {
        k_->less_mask(low_.a.data(), low_.b.data(), len, c0 * high_.a[h], c1 * high_.b[h],
                      out.data() + h * len);
    }
}

void OutcomeEnumerator::greater_mask(double c0, double c1, std::span<std::uint8_t> out) const {
    if (out.size() != (std::size_t{1} << n_))
        throw std::invalid_argument("decision table size must be 2^n");
    const std::size_t len = block_size();
    for (std::size_t h = 0; h < block_count(); ++h) {
        k_->less_mask(low_.b.data(), low_.a.data(), len, c1 * high_.b[h], c0 * high_.a[h],
                      out.data() + h * len);
    }
}

double OutcomeEnumerator::masked_sum(std::span<const std::uint8_t> bits, double c0,
                                     double c1) const {
    if (bits.size() != (std::size_t{1} << n_))
        throw std::invalid_argument("decision table size must be 2^n");
    const std::size_t len = block_size();
    return reduce_blocks([&](std::size_t h) {
        const double ca = c0 * high_.a[h];
        const double cb = c1 * high_.b[h];
        const std::uint8_t* row = bits.data() + h * len;
        double sum = 0.0;
        for (std::size_t j = 0; j < len; ++j) sum += row[j] ? ca * low_.a[j] : cb * low_.b[j];
        return sum;
    });
}

double OutcomeEnumerator::total_a() const {
    const double low = pairwise_sum(low_.a);
    return pairwise_sum(high_.a) * low;
}

double OutcomeEnumerator::total_b() const {
    const double low = pairwise_sum(low_.b);
    return pairwise_sum(high_.b) * low;
}

}  // namespace biasfuse
