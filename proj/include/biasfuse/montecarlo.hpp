#pragma once
// Seeded simulation of the source and channels.
//
// Trial t uses draws (t*(n+1) + 0) for X and (t*(n+1) + 1 + i) for Y_i of
// the CounterRng keyed by the seed. Trials can therefore be sharded across
// workers in any way without changing a single draw, and all policies in a
// comparison see the same (X, Y) stream.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biasfuse/decision.hpp"
#include "biasfuse/model.hpp"

namespace biasfuse {

struct SimConfig {
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    SystemSpec system;
};

struct SimOptions {
    std::size_t workers = 1;
    /// Record how often each outcome vector occurred (n <= 16 only).
    bool outcome_histogram = false;
};

inline constexpr std::size_t kMaxHistogramChannels = 16;

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double empirical_error = 0.0;
    double std_error = 0.0;  // sqrt(p(1-p)/trials)
    std::uint64_t seed = 0;
    std::string generator;
    std::optional<std::vector<std::uint64_t>> per_outcome_counts;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

SimResult simulate(const SimConfig& config, const DecisionPolicy& policy,
                   const SimOptions& options = {});

/// Common random numbers: every policy is scored on the same draws.
std::vector<SimResult> simulate_policy_comparison(const SimConfig& config,
                                                  std::span<const DecisionPolicy> policies,
                                                  const SimOptions& options = {});

}  // namespace biasfuse
