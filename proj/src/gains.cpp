#include "biasfuse/gains.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "biasfuse/enumerate.hpp"
#include "biasfuse/error_analysis.hpp"

namespace biasfuse {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr double kCrossCheckTolerance = 1e-9;

void check_gain_args(const Prior& prior, double r) {
    if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("common rate must lie in (0, 1/2]");
    if (!prior.canonical()) throw std::invalid_argument("gains need rho0 >= rho1");
    if (prior.degenerate()) throw std::invalid_argument("gains need rho1 > 0");
}

cpp_int binomial(unsigned n, unsigned k) {
    cpp_int c = 1;
    for (unsigned j = 1; j <= k; ++j) {
        c *= n - k + j;
        c /= j;  // exact: c is C(n-k+j, j) after this step
    }
    return c;
}

double log_unbiased_error(std::size_t n, const Prior& prior, double r) {
    if (n <= kMaxEnumerationChannels) return std::log(identical_error_probability(n, prior, r, r).p_error);
    return log_identical_error_probability(n, prior, r).log_p_error;
}

bool close_relative(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double asymptotic_gain_rate(const Prior& prior, double r) {
    check_gain_args(prior, r);
    return 0.5 * std::log(4.0 * prior.rho0() * prior.rho0() * (1.0 / r - 1.0));
}

GainBounds gain_bounds(std::size_t n, const Prior& prior, double r) {
    check_gain_args(prior, r);
    if (n < 2) throw std::invalid_argument("gain bounds need n >= 2 so that m = floor(n/2) >= 1");
    GainBounds g;
    g.n = n;
    g.m = n / 2;
    g.c = 1.0 / r - 1.0;
    const double m = static_cast<double>(g.m);
    const double slope = std::log(4.0 * prior.rho0() * prior.rho0() * g.c);
    g.log_gain_lower = m * slope - std::log(4.0 * m / prior.rho1());
    g.log_gain_upper = m * slope + std::log(2.0 * (m + 1.0) / prior.rho0());
    g.asymptotic_rate = 0.5 * slope;
    g.exact_log_gain = log_unbiased_error(n, prior, r) - fully_biased_error(n, prior, r).report.log_p_error;
    return g;
}

GainRatio exact_gain_ratio(std::size_t n, const Prior& prior, double r) {
    check_gain_args(prior, r);
    if (n == 0) throw std::invalid_argument("n must be positive");
    GainRatio g;
    g.log_ratio = log_unbiased_error(n, prior, r) - fully_biased_error(n, prior, r).report.log_p_error;
    g.ratio = std::exp(g.log_ratio);
    if (n <= kMaxEnumerationChannels) {
        const double pu = exact_error_probability(make_unbiased_system(n, prior, r)).p_error;
        const double pf = exact_error_probability(make_fully_biased_system(n, prior, r)).p_error;
        if (!close_relative(pu / pf, g.ratio, kCrossCheckTolerance))
            throw std::logic_error("gain ratio: enumeration and closed-form paths disagree at n = " +
                                   std::to_string(n));
    }
    return g;
}

std::vector<ConvergenceRow> convergence_table(const Prior& prior, double r,
                                              std::span<const std::size_t> n_values) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("n values must be strictly ascending");
        const GainBounds g = gain_bounds(n_values[i], prior, r);
        const double n = static_cast<double>(g.n);
        rows.push_back({g.n, g.exact_log_gain / n, g.log_gain_lower / n, g.log_gain_upper / n,
                        g.asymptotic_rate});
    }
    return rows;
}

Claim1Result claim1_check(std::size_t m) {
    if (m < 1 || m > kClaim1MaxM)
        throw std::invalid_argument("claim1_check needs 1 <= m <= " + std::to_string(kClaim1MaxM));
    const auto mm = static_cast<unsigned>(m);
    const cpp_int central = binomial(2 * mm, mm);
    Claim1Result out;
    out.inequality = binomial(2 * mm + 1, mm) < 2 * central;

    cpp_rational product = cpp_int(1) << (2 * mm);  // 4^m
    for (unsigned j = 1; j <= mm; ++j) product *= cpp_rational(cpp_int(2 * j - 1), cpp_int(2 * j));
    out.product_identity = product == cpp_rational(central);
    return out;
}

}  // namespace biasfuse
