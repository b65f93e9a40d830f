#pragma once
// Error-optimal (MAP) decisions for a system of independent channels.
//
// For an outcome y, A(y) = P(y | X=0) and B(y) = P(y | X=1). The MAP rule
// decides 1 exactly when rho0*A(y) < rho1*B(y). Equality is a tie; both
// answers are then optimal and this library decides 0 unless asked to
// break ties the other way. Comparisons treat values that agree to a
// relative 1e-12 as tied, so products formed in different orders give the
// same decision.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "biasfuse/model.hpp"

namespace biasfuse {

using OutcomeVector = std::vector<std::uint8_t>;

/// Outcome whose bit i is bit i of `index`.
OutcomeVector outcome_from_index(std::uint64_t index, std::size_t n);
std::uint64_t outcome_index(std::span<const std::uint8_t> y);

struct LikelihoodPair {
    double a = 0.0;  // P(y | X=0)
    double b = 0.0;  // P(y | X=1)

    double delta() const noexcept { return a - b; }
    /// a/b; +inf when b = 0 < a; empty when a = b = 0.
    std::optional<double> ratio() const noexcept;
};

/// Products in the probability domain, so S- and Z-channels give exact zeros.
LikelihoodPair likelihoods(const SystemSpec& system, std::span<const std::uint8_t> y);

enum class TieBreak : std::uint8_t { TowardZero, TowardOne };

inline constexpr double kTieTolerance = 1e-12;

/// Decision for given likelihoods; rho0*a vs rho1*b with the tie band.
int decide_from_likelihoods(const Prior& prior, LikelihoodPair l,
                            TieBreak tie = TieBreak::TowardZero) noexcept;

/// Requires a canonical system.
int map_decide(const SystemSpec& system, std::span<const std::uint8_t> y,
               TieBreak tie = TieBreak::TowardZero);

/// Additive log-likelihood-ratio contributions of one channel:
///   w1 = ln(alpha / (1 - beta)),  w0 = ln((1 - alpha) / beta).
/// Structural zeros give -inf / +inf; 0/0 gives NaN.
struct LlrWeight {
    double w1;
    double w0;

    double operator()(int y) const noexcept { return y ? w1 : w0; }
};

std::vector<LlrWeight> llr_weights(const SystemSpec& system);

/// MAP decision via the LLR sum. Any -inf term forces 1, any +inf forces 0;
/// conflicting infinities or 0/0 terms fall back to likelihoods().
int llr_decide(const SystemSpec& system, std::span<const LlrWeight> weights,
               std::span<const std::uint8_t> y);

inline constexpr std::size_t kDefaultTableLimit = 24;

/// A map from outcomes to decisions: either the MAP comparator, a constant,
/// or an explicit table indexed by outcome_index().
class DecisionPolicy {
public:
    enum class Kind : std::uint8_t { Map, Constant, Table };

    static DecisionPolicy map(SystemSpec system, TieBreak tie = TieBreak::TowardZero);
    static DecisionPolicy constant(SystemSpec system, int decision);
    /// Table entries must be 0 or 1 and the size 2^n.
    static DecisionPolicy from_table(SystemSpec system, std::vector<std::uint8_t> table);

    int decide(std::span<const std::uint8_t> y) const;
    /// Outcome given by index; n must be below 64.
    int decide_index(std::uint64_t index) const;

    Kind kind() const noexcept { return kind_; }
    const SystemSpec& system() const noexcept { return system_; }
    bool has_table() const noexcept { return !table_.empty(); }
    std::span<const std::uint8_t> table() const noexcept { return table_; }

private:
    DecisionPolicy(SystemSpec system, Kind kind) : system_(std::move(system)), kind_(kind) {}

    SystemSpec system_;
    Kind kind_;
    TieBreak tie_ = TieBreak::TowardZero;
    int constant_ = 0;
    std::vector<std::uint8_t> table_;
};

/// MAP policy with every decision materialized. Requires a canonical system
/// and n <= table_limit (SizeGuardError otherwise).
DecisionPolicy policy_table(const SystemSpec& system, TieBreak tie = TieBreak::TowardZero,
                            std::size_t table_limit = kDefaultTableLimit);

/// Table of a constant decision, for comparisons against the MAP policy.
DecisionPolicy constant_policy_table(const SystemSpec& system, int decision,
                                     std::size_t table_limit = kDefaultTableLimit);

}  // namespace biasfuse
