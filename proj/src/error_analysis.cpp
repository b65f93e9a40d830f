#include "biasfuse/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "biasfuse/errors.hpp"

namespace biasfuse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSweepChannels = 20;
// Largest n for which every C(n, k) is finite in double precision.
constexpr std::size_t kDirectBinomialLimit = 1000;
constexpr double kEndpointTolerance = 1e-12;

double safe_log(double p) noexcept { return p > 0.0 ? std::log(p) : kNegInf; }

// k * ln(x) with the convention 0 * ln(0) = 0.
double xlogy(double k, double x) noexcept {
    if (k == 0.0) return 0.0;
    return k * safe_log(x);
}

double log_binomial(std::size_t n, std::size_t k) noexcept {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

void check_identical_args(std::size_t n, const Prior& prior, double alpha, double beta) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (prior.degenerate()) throw std::invalid_argument("prior with a zero mass");
    check_probability(alpha, "alpha");
    check_probability(beta, "beta");
}

// Log of sum(exp(terms)), ignoring -inf entries.
double log_sum_exp(std::span<const double> terms) noexcept {
    double top = kNegInf;
    for (double t : terms) top = std::max(top, t);
    if (top == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms)
        if (t != kNegInf) s += std::exp(t - top);
    return top + std::log(s);
}

}  // namespace

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::Enumeration: return "enumeration";
        case Method::Binomial: return "binomial";
        case Method::LogBinomial: return "log-binomial";
        case Method::ClosedForm: return "closed-form";
    }
    return "unknown";
}

ErrorReport exact_error_probability(const SystemSpec& system, const EnumerationOptions& options) {
    const OutcomeEnumerator e(system, options);
    const double p = e.min_sum(system.prior().rho0(), system.prior().rho1());
    return {p, safe_log(p), Method::Enumeration};
}

double policy_error_probability(const DecisionPolicy& policy, const EnumerationOptions& options) {
    const SystemSpec& system = policy.system();
    const OutcomeEnumerator e(system, options);
    const double rho0 = system.prior().rho0();
    const double rho1 = system.prior().rho1();
    if (policy.has_table()) return e.masked_sum(policy.table(), rho0, rho1);
    std::vector<std::uint8_t> bits(std::size_t{1} << system.n());
    for (std::size_t idx = 0; idx < bits.size(); ++idx)
        bits[idx] = static_cast<std::uint8_t>(policy.decide_index(idx));
    return e.masked_sum(bits, rho0, rho1);
}

ErrorReport identical_error_probability(std::size_t n, const Prior& prior, double alpha, double beta) {
    check_identical_args(n, prior, alpha, beta);
    const double rho0 = prior.rho0();
    const double rho1 = prior.rho1();
    double p = 0.0;
    if (n <= kDirectBinomialLimit) {
        double choose = 1.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double nk = static_cast<double>(n - k);
            const double under0 = rho0 * std::pow(alpha, kk) * std::pow(1.0 - alpha, nk);
            const double under1 = rho1 * std::pow(1.0 - beta, kk) * std::pow(beta, nk);
            p += choose * std::min(under0, under1);
            choose = choose * nk / (kk + 1.0);
        }
    } else {
        const double l0 = std::log(rho0);
        const double l1 = std::log(rho1);
        for (std::size_t k = 0; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double nk = static_cast<double>(n - k);
            const double t0 = l0 + xlogy(kk, alpha) + xlogy(nk, 1.0 - alpha);
            const double t1 = l1 + xlogy(kk, 1.0 - beta) + xlogy(nk, beta);
            const double t = std::min(t0, t1);
            if (t != kNegInf) p += std::exp(log_binomial(n, k) + t);
        }
    }
    return {p, safe_log(p), Method::Binomial};
}

ErrorReport log_identical_error_probability(std::size_t n, const Prior& prior, double alpha,
                                            double beta) {
    check_identical_args(n, prior, alpha, beta);
    const double l0 = std::log(prior.rho0());
    const double l1 = std::log(prior.rho1());
    std::vector<double> terms(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double nk = static_cast<double>(n - k);
        const double t0 = l0 + xlogy(kk, alpha) + xlogy(nk, 1.0 - alpha);
        const double t1 = l1 + xlogy(kk, 1.0 - beta) + xlogy(nk, beta);
        const double t = std::min(t0, t1);
        terms[k] = t == kNegInf ? kNegInf : log_binomial(n, k) + t;
    }
    const double log_p = log_sum_exp(terms);
    return {std::exp(log_p), log_p, Method::LogBinomial};
}

ErrorReport log_identical_error_probability(std::size_t n, const Prior& prior, double r) {
    if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("common rate must lie in (0, 1/2]");
    return log_identical_error_probability(n, prior, r, r);
}

FullyBiasedReport fully_biased_error(const Prior& prior, std::span<const double> rates) {
    if (!prior.canonical()) throw std::invalid_argument("fully-biased error needs rho0 >= rho1");
    if (prior.degenerate()) throw std::invalid_argument("prior with a zero mass");
    if (rates.empty()) throw std::invalid_argument("n must be positive");
    const double rho0 = prior.rho0();
    double product = rho0;
    double log_product = std::log(rho0);
    for (double r : rates) {
        if (!(r >= 0.0 && r <= 0.5)) throw std::invalid_argument("rates must lie in [0, 1/2]");
        product *= r / rho0;
        log_product += safe_log(r / rho0);
    }
    FullyBiasedReport out;
    out.condition_holds = product <= prior.rho1();
    out.report.method = Method::ClosedForm;
    if (out.condition_holds) {
        out.report.p_error = product;
        out.report.log_p_error = log_product;
    } else {
        out.report.p_error = prior.rho1();
        out.report.log_p_error = std::log(prior.rho1());
    }
    return out;
}

FullyBiasedReport fully_biased_error(std::size_t n, const Prior& prior, double r) {
    const std::vector<double> rates(n, r);
    return fully_biased_error(prior, rates);
}

BiasSweep bias_sweep_at(const SystemSpec& system, std::size_t k, std::span<const double> alphas,
                        const EnumerationOptions& options) {
    require_canonical(system);
    if (k >= system.n()) throw std::invalid_argument("channel index out of range");
    if (system.n() > kMaxSweepChannels)
        throw SizeGuardError("bias sweeps are limited to n <= " + std::to_string(kMaxSweepChannels));
    const Prior& prior = system.prior();
    BiasSweep s;
    s.channel_index = k;
    s.rate = error_rate(system.channel(k), prior);
    const auto [lo, hi] = feasible_alpha_range(prior, s.rate);
    for (double alpha : alphas) {
        if (alpha < lo - 1e-15 || alpha > hi + 1e-15)
            throw std::invalid_argument("alpha outside the feasible interval for this rate");
        const double a = std::clamp(alpha, lo, hi);
        const double b = beta_for_rate(prior, s.rate, a);
        s.alpha_grid.push_back(a);
        s.beta_grid.push_back(b);
        s.p_error_at.push_back(exact_error_probability(system.with_channel(k, Channel(a, b)), options).p_error);
    }
    return s;
}

BiasSweep bias_sweep(const SystemSpec& system, std::size_t k, std::size_t grid_size,
                     const EnumerationOptions& options) {
    require_canonical(system);
    if (grid_size < 3) throw std::invalid_argument("grid_size must be at least 3");
    if (k >= system.n()) throw std::invalid_argument("channel index out of range");
    const Prior& prior = system.prior();
    const double r = error_rate(system.channel(k), prior);
    const auto [lo, hi] = feasible_alpha_range(prior, r);

    std::optional<double> local_max;
    if (r >= prior.rho1()) {
        if (prior.rho0() == prior.rho1())
            throw std::invalid_argument(
                "local maximum (r - rho1)/(rho0 - rho1) is undefined for rho0 = rho1");
        local_max = (r - prior.rho1()) / (prior.rho0() - prior.rho1());
    }

    std::vector<double> grid(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t j = 0; j < grid_size; ++j) grid[j] = lo + step * static_cast<double>(j);
    grid.back() = hi;

    std::optional<std::size_t> row;
    if (local_max) {
        const double a = std::clamp(*local_max, lo, hi);
        auto it = std::lower_bound(grid.begin(), grid.end(), a);
        // A point within rounding of an existing node replaces it; inserting a
        // near-duplicate would blow up the normalized second differences.
        const double snap = 1e-6 * step;
        if (it != grid.begin() && (it == grid.end() || a - *(it - 1) < *it - a)) --it;
        if (it != grid.end() && std::abs(*it - a) <= snap) {
            *it = a;
        } else {
            it = grid.insert(std::lower_bound(grid.begin(), grid.end(), a), a);
        }
        row = static_cast<std::size_t>(it - grid.begin());
    }

    BiasSweep s = bias_sweep_at(system, k, grid, options);
    s.local_max_alpha = local_max;
    s.local_max_row = row;
    return s;
}

ConcavityVerdict check_concavity(const BiasSweep& sweep, double tolerance) {
    ConcavityVerdict v;
    const auto& x = sweep.alpha_grid;
    const auto& p = sweep.p_error_at;
    v.max_second_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double h1 = x[i] - x[i - 1];
        const double h2 = x[i + 1] - x[i];
        if (h1 <= 0.0 || h2 <= 0.0) continue;
        const double d = ((p[i + 1] - p[i]) / h2 - (p[i] - p[i - 1]) / h1) * 0.5 * (h1 + h2);
        v.max_second_difference = std::max(v.max_second_difference, d);
    }
    if (v.max_second_difference == -std::numeric_limits<double>::infinity())
        v.max_second_difference = 0.0;
    v.concave = v.max_second_difference <= tolerance;
    if (!p.empty()) {
        const double end_min = std::min(p.front(), p.back());
        v.minimum_at_endpoint = std::all_of(p.begin(), p.end(), [&](double q) {
            return q >= end_min - kEndpointTolerance;
        });
    }
    if (sweep.local_max_row) {
        const std::size_t r = *sweep.local_max_row;
        if (r > 0) v.local_max_dominates = v.local_max_dominates && p[r] >= p[r - 1] - kEndpointTolerance;
        if (r + 1 < p.size())
            v.local_max_dominates = v.local_max_dominates && p[r] >= p[r + 1] - kEndpointTolerance;
    }
    return v;
}

double llr_rate_constrained_derivative(const SystemSpec& system, std::size_t k,
                                       std::span<const std::uint8_t> y) {
    require_canonical(system);
    if (k >= system.n()) throw std::invalid_argument("channel index out of range");
    if (y.size() != system.n()) throw std::invalid_argument("outcome length does not match n");
    const Channel& c = system.channel(k);
    if (!(c.alpha > 0.0 && c.alpha < 1.0 && c.beta > 0.0 && c.beta < 1.0))
        throw std::invalid_argument("derivative needs alpha_k, beta_k strictly inside (0,1)");
    const double rho0 = system.prior().rho0();
    const double rho1 = system.prior().rho1();
    const double r = error_rate(c, system.prior());
    if (y[k]) return (rho1 - r) / (rho1 * c.alpha * (1.0 - c.beta));
    return (rho0 - r) / (rho1 * c.beta * (1.0 - c.alpha));
}

}  // namespace biasfuse
