#pragma once
// Gain of n fully-biased (S-) channels over n unbiased channels at a common
// error rate r: bounds on the log ratio of their minimum error
// probabilities, the limiting exponent per channel, and an exact check of
// the two binomial identities the bounds rest on.

#include <cstddef>
#include <span>
#include <vector>

#include "biasfuse/model.hpp"

namespace biasfuse {

/// With m = floor(n/2) and c = 1/r - 1:
///   lower = m ln(4 rho0^2 c) - ln(4m / rho1)
///   upper = m ln(4 rho0^2 c) + ln(2(m+1) / rho0)
///   asymptotic_rate = 1/2 ln(4 rho0^2 c)
struct GainBounds {
    std::size_t n = 0;
    std::size_t m = 0;
    double c = 0.0;
    double log_gain_lower = 0.0;
    double log_gain_upper = 0.0;
    double asymptotic_rate = 0.0;
    double exact_log_gain = 0.0;
};

/// n >= 2, r in (0, 1/2], canonical prior with rho1 > 0.
GainBounds gain_bounds(std::size_t n, const Prior& prior, double r);

double asymptotic_gain_rate(const Prior& prior, double r);

struct GainRatio {
    double log_ratio = 0.0;
    double ratio = 0.0;  // exp(log_ratio); may overflow to +inf for large n
};

/// P_e(unbiased) / P_e(fully biased). For n <= 24 the formula paths are
/// cross-checked against enumeration of both systems (std::logic_error on
/// disagreement beyond relative 1e-9).
GainRatio exact_gain_ratio(std::size_t n, const Prior& prior, double r);

struct ConvergenceRow {
    std::size_t n = 0;
    double rate_exact = 0.0;
    double rate_lower = 0.0;
    double rate_upper = 0.0;
    double rate_asymptotic = 0.0;
};

/// n_values ascending, each >= 2.
std::vector<ConvergenceRow> convergence_table(const Prior& prior, double r,
                                              std::span<const std::size_t> n_values);

struct Claim1Result {
    bool inequality = false;        // C(2m+1, m) < 2 C(2m, m)
    bool product_identity = false;  // C(2m, m) = 4^m prod_{j=1..m} (1 - 1/(2j))
};

inline constexpr std::size_t kClaim1MaxM = 64;

/// Exact integer / rational arithmetic; 1 <= m <= 64.
Claim1Result claim1_check(std::size_t m);

}  // namespace biasfuse
