#pragma once
// Minimum error probability of the MAP policy and the structural checks
// built on it: identical-channel binomial sums (direct and log-domain), the
// all-S closed form, single-coordinate bias sweeps at a fixed error rate,
// and the analytic derivative of the log-likelihood ratio along such a
// sweep.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "biasfuse/decision.hpp"
#include "biasfuse/enumerate.hpp"
#include "biasfuse/model.hpp"

namespace biasfuse {

enum class Method : std::uint8_t { Enumeration, Binomial, LogBinomial, ClosedForm };

std::string_view method_name(Method m) noexcept;

struct ErrorReport {
    double p_error = 0.0;
    double log_p_error = 0.0;  // -inf when p_error is exactly zero
    Method method = Method::Enumeration;
};

/// sum_y min(rho0*A(y), rho1*B(y)) over all 2^n outcomes. Valid for any
/// system; SizeGuardError above options.max_channels.
ErrorReport exact_error_probability(const SystemSpec& system, const EnumerationOptions& options = {});

/// Error probability of an arbitrary policy:
///   sum_y [pi(y)=1] rho0*A(y) + [pi(y)=0] rho1*B(y).
double policy_error_probability(const DecisionPolicy& policy, const EnumerationOptions& options = {});

/// n identical channels (alpha, beta): the MAP decision depends only on the
/// number k of ones, giving
///   sum_k C(n,k) min(rho0 alpha^k (1-alpha)^(n-k), rho1 (1-beta)^k beta^(n-k)).
ErrorReport identical_error_probability(std::size_t n, const Prior& prior, double alpha, double beta);

/// Same sum evaluated as a log-sum-exp over k with ln C(n,k) from lgamma.
ErrorReport log_identical_error_probability(std::size_t n, const Prior& prior, double alpha,
                                            double beta);
/// Unbiased channels alpha = beta = r, r in (0, 1/2].
ErrorReport log_identical_error_probability(std::size_t n, const Prior& prior, double r);

struct FullyBiasedReport {
    ErrorReport report;
    /// rho0 * prod(r_i / rho0) <= rho1: the all-S system is optimal and its
    /// policy is the product of the outputs.
    bool condition_holds = false;
};

/// min(rho0 * prod(r_i / rho0), rho1), the error of n S-channels with the
/// given rates and a lower bound for every system sharing those rates.
FullyBiasedReport fully_biased_error(const Prior& prior, std::span<const double> rates);
FullyBiasedReport fully_biased_error(std::size_t n, const Prior& prior, double r);

/// P_e as a function of one channel's alpha with its rate and all other
/// channels held fixed; beta follows beta = (r - rho0*alpha)/rho1.
struct BiasSweep {
    std::size_t channel_index = 0;
    double rate = 0.0;
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
    std::vector<double> p_error_at;
    std::optional<double> local_max_alpha;   // (r - rho1)/(rho0 - rho1)
    std::optional<std::size_t> local_max_row;
};

/// grid_size evenly spaced points spanning the feasible interval, plus the
/// local-maximum point as an extra grid member when r_k >= rho1.
BiasSweep bias_sweep(const SystemSpec& system, std::size_t k, std::size_t grid_size,
                     const EnumerationOptions& options = {});

/// Evaluates the sweep at caller-chosen alphas (each must be feasible).
BiasSweep bias_sweep_at(const SystemSpec& system, std::size_t k, std::span<const double> alphas,
                        const EnumerationOptions& options = {});

struct ConcavityVerdict {
    /// Largest spacing-normalized second difference; equals
    /// p[i-1] - 2 p[i] + p[i+1] on a uniform grid. <= 0 for concave data.
    double max_second_difference = 0.0;
    bool concave = true;
    /// The smallest value on the sweep is at one of its two ends.
    bool minimum_at_endpoint = true;
    /// P_e at the local-max row is >= both grid neighbours (true if absent).
    bool local_max_dominates = true;
};

inline constexpr double kConcavityTolerance = 1e-9;

ConcavityVerdict check_concavity(const BiasSweep& sweep, double tolerance = kConcavityTolerance);

/// d ln(A/B) / d alpha_k along beta_k = (r_k - rho0*alpha_k)/rho1:
///   (rho1 - r_k) y_k / (rho1 alpha_k (1 - beta_k))
///     + (rho0 - r_k) (1 - y_k) / (rho1 beta_k (1 - alpha_k)).
/// alpha_k and beta_k must lie strictly inside (0, 1).
double llr_rate_constrained_derivative(const SystemSpec& system, std::size_t k,
                                       std::span<const std::uint8_t> y);

}  // namespace biasfuse
