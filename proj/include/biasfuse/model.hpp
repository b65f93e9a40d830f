#pragma once
// Priors, binary channels and systems of n independent channels.
//
// A channel maps the source bit X to an observed bit Y with
//   alpha = P(Y=1 | X=0),  beta = P(Y=0 | X=1).
// Under a prior (rho0, rho1) its error rate is r = rho0*alpha + rho1*beta.
// A system is canonical when rho0 >= rho1 and every r_i <= 1/2; the
// analysis modules assume canonical systems and canonicalize() is the
// reduction for everything else.

#include <cstdint>
#include <span>
#include <vector>

namespace biasfuse {

/// Tolerance used when checking that rho0 + rho1 = 1.
inline constexpr double kPriorSumTolerance = 1e-12;

class Prior {
public:
    /// rho1 is taken as 1 - rho0.
    explicit Prior(double rho0);
    /// Both masses given explicitly; they must sum to one within 1e-12.
    Prior(double rho0, double rho1);

    double rho0() const noexcept { return rho0_; }
    double rho1() const noexcept { return rho1_; }
    double mass(int x) const noexcept { return x == 0 ? rho0_ : rho1_; }

    bool canonical() const noexcept { return rho0_ >= rho1_; }
    /// Either mass is zero; such priors cannot be used to build a system.
    bool degenerate() const noexcept { return rho0_ == 0.0 || rho1_ == 0.0; }

    /// Prior with the source labels exchanged.
    Prior swapped() const noexcept { return Prior(rho1_, rho0_, Unchecked{}); }

    friend bool operator==(const Prior&, const Prior&) = default;

private:
    struct Unchecked {};
    Prior(double rho0, double rho1, Unchecked) noexcept : rho0_(rho0), rho1_(rho1) {}

    double rho0_;
    double rho1_;
};

enum class ChannelKind : std::uint8_t {
    Unbiased,  // alpha == beta
    SChannel,  // beta == 0 (includes the noiseless channel)
    ZChannel,  // alpha == 0, beta > 0
    Biased,
};

struct Channel {
    double alpha = 0.0;
    double beta = 0.0;

    Channel() = default;
    Channel(double alpha_, double beta_);

    ChannelKind kind() const noexcept;
    bool is_unbiased() const noexcept { return alpha == beta; }
    bool is_s_channel() const noexcept { return beta == 0.0; }
    bool is_z_channel() const noexcept { return alpha == 0.0; }

    /// P(Y = y | X = x).
    double conditional(int y, int x) const noexcept {
        if (x == 0) return y == 1 ? alpha : 1.0 - alpha;
        return y == 1 ? 1.0 - beta : beta;
    }

    friend bool operator==(const Channel&, const Channel&) = default;
};

/// r = rho0*alpha + rho1*beta.
double error_rate(const Channel& channel, const Prior& prior) noexcept;

class SystemSpec {
public:
    /// Rejects empty channel lists and degenerate priors.
    SystemSpec(Prior prior, std::vector<Channel> channels);

    std::size_t n() const noexcept { return channels_.size(); }
    const Prior& prior() const noexcept { return prior_; }
    std::span<const Channel> channels() const noexcept { return channels_; }
    const Channel& channel(std::size_t i) const { return channels_.at(i); }

    std::vector<double> rates() const;
    bool canonical() const noexcept;
    bool all_identical() const noexcept;
    bool all_s_channels() const noexcept;

    /// Copy with channel i replaced.
    SystemSpec with_channel(std::size_t i, Channel c) const;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
    Prior prior_;
    std::vector<Channel> channels_;
};

/// Throws std::invalid_argument unless the system is canonical.
void require_canonical(const SystemSpec& system);

/// Records how canonicalize() relabeled a system.
///
/// A canonical outcome bit is y'_i = y_i XOR labels_swapped XOR flipped[i],
/// and a canonical decision d' maps back to d = d' XOR labels_swapped.
struct CanonicalTransform {
    bool labels_swapped = false;
    std::vector<bool> flipped;  // per channel, output relabeled

    bool identity() const noexcept;
    std::vector<std::uint8_t> to_canonical(std::span<const std::uint8_t> y) const;
    int decision_to_original(int canonical_decision) const noexcept {
        return canonical_decision ^ static_cast<int>(labels_swapped);
    }
};

struct Canonicalized {
    SystemSpec system;
    CanonicalTransform transform;
};

Canonicalized canonicalize(const SystemSpec& system);

/// n channels with alpha = beta = r; r must lie in (0, 1/2].
SystemSpec make_unbiased_system(std::size_t n, const Prior& prior, double r);

/// S-channels with alpha_i = r_i / rho0, beta_i = 0.
SystemSpec make_fully_biased_system(const Prior& prior, std::span<const double> rates);
SystemSpec make_fully_biased_system(std::size_t n, const Prior& prior, double r);

/// Feasible alpha range for a channel of rate r: beta = (r - rho0*alpha)/rho1 in [0,1].
struct AlphaRange {
    double lo;
    double hi;
};
AlphaRange feasible_alpha_range(const Prior& prior, double r);

/// beta that keeps the rate at r for the given alpha, clamped to [0,1]
/// against rounding at the interval ends.
double beta_for_rate(const Prior& prior, double r, double alpha);

/// Random channels with prescribed rates. alpha_i is uniform on the
/// feasible interval; beta_i is back-solved. Deterministic in seed.
SystemSpec random_system_with_rates(const Prior& prior, std::span<const double> rates,
                                    std::uint64_t seed);

}  // namespace biasfuse
