#include "biasfuse/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "biasfuse/rng.hpp"

namespace biasfuse {

namespace {

struct ShardCounts {
    std::vector<std::uint64_t> errors;  // one per policy
    std::vector<std::uint64_t> outcomes;
};

void run_shard(const SimConfig& config, std::span<const DecisionPolicy> policies,
               std::uint64_t begin, std::uint64_t end, bool histogram, ShardCounts& out) {
    const SystemSpec& system = config.system;
    const std::size_t n = system.n();
    const auto channels = system.channels();
    const double rho1 = system.prior().rho1();
    const CounterRng rng(config.seed);
    const bool indexed = n < 64;

    out.errors.assign(policies.size(), 0);
    if (histogram) out.outcomes.assign(std::size_t{1} << n, 0);
    OutcomeVector y(n);
    for (std::uint64_t t = begin; t < end; ++t) {
        const std::uint64_t base = t * (n + 1);
        const int x = rng.uniform(base) < rho1 ? 1 : 0;
        std::uint64_t index = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform(base + 1 + i);
            // X=0: Y=1 with prob alpha. X=1: Y=0 with prob beta.
            const int yi = x == 0 ? (u < channels[i].alpha ? 1 : 0) : (u < channels[i].beta ? 0 : 1);
            y[i] = static_cast<std::uint8_t>(yi);
            if (indexed && yi) index |= std::uint64_t{1} << i;
        }
        if (histogram) ++out.outcomes[index];
        for (std::size_t p = 0; p < policies.size(); ++p) {
            const int d = indexed ? policies[p].decide_index(index) : policies[p].decide(y);
            if (d != x) ++out.errors[p];
        }
    }
}

SimResult make_result(const SimConfig& config, std::uint64_t errors) {
    SimResult r;
    r.trials = config.trials;
    r.errors = errors;
    r.empirical_error = static_cast<double>(errors) / static_cast<double>(config.trials);
    r.std_error = std::sqrt(r.empirical_error * (1.0 - r.empirical_error) /
                            static_cast<double>(config.trials));
    r.seed = config.seed;
    r.generator = CounterRng::kName;
    return r;
}

}  // namespace

std::vector<SimResult> simulate_policy_comparison(const SimConfig& config,
                                                  std::span<const DecisionPolicy> policies,
                                                  const SimOptions& options) {
    if (config.trials == 0) throw std::invalid_argument("trials must be positive");
    if (policies.empty()) throw std::invalid_argument("at least one policy is required");
    for (const auto& p : policies) {
        if (!(p.system() == config.system))
            throw std::invalid_argument("policy was built for a different system");
    }
    const bool histogram = options.outcome_histogram;
    if (histogram && config.system.n() > kMaxHistogramChannels)
        throw std::invalid_argument("outcome histograms are limited to n <= 16");

    const std::uint64_t workers =
        std::clamp<std::uint64_t>(options.workers, 1, std::max<std::uint64_t>(config.trials, 1));
    std::vector<ShardCounts> shards(workers);
    const std::uint64_t chunk = config.trials / workers;
    const std::uint64_t extra = config.trials % workers;
    auto bounds = [&](std::uint64_t w) {
        const std::uint64_t begin = w * chunk + std::min(w, extra);
        return std::pair{begin, begin + chunk + (w < extra ? 1 : 0)};
    };
    if (workers == 1) {
        run_shard(config, policies, 0, config.trials, histogram, shards[0]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const auto [begin, end] = bounds(w);
                run_shard(config, policies, begin, end, histogram, shards[w]);
            });
        }
    }

    std::vector<SimResult> results;
    results.reserve(policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
        std::uint64_t errors = 0;
        for (const auto& s : shards) errors += s.errors[p];
        results.push_back(make_result(config, errors));
    }
    if (histogram) {
        std::vector<std::uint64_t> counts(std::size_t{1} << config.system.n(), 0);
        for (const auto& s : shards)
            for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += s.outcomes[j];
        for (auto& r : results) r.per_outcome_counts = counts;
    }
    return results;
}

SimResult simulate(const SimConfig& config, const DecisionPolicy& policy, const SimOptions& options) {
    return simulate_policy_comparison(config, std::span(&policy, 1), options).front();
}

}  // namespace biasfuse
