#include "biasfuse/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "biasfuse/rng.hpp"

namespace biasfuse {

namespace {

bool is_probability(double p) noexcept { return p >= 0.0 && p <= 1.0; }

}  // namespace

Prior::Prior(double rho0) : Prior(rho0, 1.0 - rho0) {}

Prior::Prior(double rho0, double rho1) : rho0_(rho0), rho1_(rho1) {
    if (!is_probability(rho0) || !is_probability(rho1))
        throw std::invalid_argument("prior masses must lie in [0,1]");
    if (std::abs(rho0 + rho1 - 1.0) > kPriorSumTolerance)
        throw std::invalid_argument("prior masses must sum to 1");
}

Channel::Channel(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!is_probability(alpha) || !is_probability(beta))
        throw std::invalid_argument("channel crossover probabilities must lie in [0,1]");
}

ChannelKind Channel::kind() const noexcept {
    if (alpha == beta) return ChannelKind::Unbiased;
    if (beta == 0.0) return ChannelKind::SChannel;
    if (alpha == 0.0) return ChannelKind::ZChannel;
    return ChannelKind::Biased;
}

double error_rate(const Channel& channel, const Prior& prior) noexcept {
    return prior.rho0() * channel.alpha + prior.rho1() * channel.beta;
}

SystemSpec::SystemSpec(Prior prior, std::vector<Channel> channels)
    : prior_(prior), channels_(std::move(channels)) {
    if (channels_.empty()) throw std::invalid_argument("a system needs at least one channel");
    if (prior_.degenerate())
        throw std::invalid_argument("prior with a zero mass makes the decision problem trivial");
    for (const auto& c : channels_) {
        if (!is_probability(c.alpha) || !is_probability(c.beta))
            throw std::invalid_argument("channel crossover probabilities must lie in [0,1]");
    }
}

std::vector<double> SystemSpec::rates() const {
    std::vector<double> r;
    r.reserve(channels_.size());
    for (const auto& c : channels_) r.push_back(error_rate(c, prior_));
    return r;
}

bool SystemSpec::canonical() const noexcept {
    if (!prior_.canonical()) return false;
    return std::all_of(channels_.begin(), channels_.end(),
                       [&](const Channel& c) { return error_rate(c, prior_) <= 0.5; });
}

bool SystemSpec::all_identical() const noexcept {
    return std::all_of(channels_.begin(), channels_.end(),
                       [&](const Channel& c) { return c == channels_.front(); });
}

bool SystemSpec::all_s_channels() const noexcept {
    return std::all_of(channels_.begin(), channels_.end(),
                       [](const Channel& c) { return c.beta == 0.0; });
}

SystemSpec SystemSpec::with_channel(std::size_t i, Channel c) const {
    auto channels = channels_;
    channels.at(i) = c;
    return SystemSpec(prior_, std::move(channels));
}

void require_canonical(const SystemSpec& system) {
    if (!system.prior().canonical())
        throw std::invalid_argument("system is not canonical: rho0 < rho1");
    const auto rates = system.rates();
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] > 0.5)
            throw std::invalid_argument("system is not canonical: channel " + std::to_string(i) +
                                        " has error rate above 1/2");
    }
}

bool CanonicalTransform::identity() const noexcept {
    return !labels_swapped && std::none_of(flipped.begin(), flipped.end(), [](bool f) { return f; });
}

std::vector<std::uint8_t> CanonicalTransform::to_canonical(std::span<const std::uint8_t> y) const {
    if (y.size() != flipped.size())
        throw std::invalid_argument("outcome length does not match the system");
    std::vector<std::uint8_t> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = static_cast<std::uint8_t>(y[i] ^ static_cast<int>(labels_swapped) ^
                                           static_cast<int>(flipped[i]));
    return out;
}

Canonicalized canonicalize(const SystemSpec& system) {
    CanonicalTransform t;
    t.flipped.assign(system.n(), false);

    // Relabeling X <-> 1-X together with every Y_i <-> 1-Y_i exchanges alpha
    // and beta and leaves each rate unchanged.
    Prior prior = system.prior();
    std::vector<Channel> channels(system.channels().begin(), system.channels().end());
    if (!prior.canonical()) {
        t.labels_swapped = true;
        prior = prior.swapped();
        for (auto& c : channels) std::swap(c.alpha, c.beta);
    }
    // Relabeling one output maps (alpha, beta, r) to (1-alpha, 1-beta, 1-r).
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (error_rate(channels[i], prior) > 0.5) {
            channels[i] = Channel(1.0 - channels[i].alpha, 1.0 - channels[i].beta);
            t.flipped[i] = true;
        }
    }
    return {SystemSpec(prior, std::move(channels)), std::move(t)};
}

SystemSpec make_unbiased_system(std::size_t n, const Prior& prior, double r) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("common rate must lie in (0, 1/2]");
    return SystemSpec(prior, std::vector<Channel>(n, Channel(r, r)));
}

SystemSpec make_fully_biased_system(const Prior& prior, std::span<const double> rates) {
    if (!prior.canonical()) throw std::invalid_argument("fully-biased systems need rho0 >= rho1");
    if (rates.empty()) throw std::invalid_argument("n must be positive");
    std::vector<Channel> channels;
    channels.reserve(rates.size());
    for (double r : rates) {
        if (!(r >= 0.0)) throw std::invalid_argument("rates must be non-negative");
        const double alpha = r / prior.rho0();
        if (alpha > 1.0) throw std::invalid_argument("rate exceeds rho0: no S-channel attains it");
        channels.emplace_back(alpha, 0.0);
    }
    return SystemSpec(prior, std::move(channels));
}

SystemSpec make_fully_biased_system(std::size_t n, const Prior& prior, double r) {
    const std::vector<double> rates(n, r);
    return make_fully_biased_system(prior, rates);
}

AlphaRange feasible_alpha_range(const Prior& prior, double r) {
    const double lo = std::max(0.0, (r - prior.rho1()) / prior.rho0());
    const double hi = std::min(1.0, r / prior.rho0());
    return {lo, hi};
}

double beta_for_rate(const Prior& prior, double r, double alpha) {
    const double beta = (r - prior.rho0() * alpha) / prior.rho1();
    return std::clamp(beta, 0.0, 1.0);
}

SystemSpec random_system_with_rates(const Prior& prior, std::span<const double> rates,
                                    std::uint64_t seed) {
    if (prior.degenerate()) throw std::invalid_argument("random systems need rho0, rho1 > 0");
    if (!prior.canonical()) throw std::invalid_argument("random systems need rho0 >= rho1");
    if (rates.empty()) throw std::invalid_argument("n must be positive");
    const CounterRng rng(seed);
    std::vector<Channel> channels;
    channels.reserve(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double r = rates[i];
        if (!(r >= 0.0 && r <= 0.5)) throw std::invalid_argument("rates must lie in [0, 1/2]");
        const auto [lo, hi] = feasible_alpha_range(prior, r);
        const double alpha = lo + (hi - lo) * rng.uniform(i);
        channels.emplace_back(alpha, beta_for_rate(prior, r, alpha));
    }
    return SystemSpec(prior, std::move(channels));
}

}  // namespace biasfuse
