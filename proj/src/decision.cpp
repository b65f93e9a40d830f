#include "biasfuse/decision.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "biasfuse/enumerate.hpp"
#include "biasfuse/errors.hpp"

namespace biasfuse {

namespace {

void check_length(const SystemSpec& system, std::span<const std::uint8_t> y) {
    if (y.size() != system.n())
        throw std::invalid_argument("outcome length " + std::to_string(y.size()) +
                                    " does not match n = " + std::to_string(system.n()));
}

double log_ratio(double num, double den) noexcept {
    if (num == 0.0 && den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    if (num == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(num / den);
}

void check_table_size(const SystemSpec& system, std::size_t table_limit) {
    if (system.n() > table_limit)
        throw SizeGuardError("policy table for n = " + std::to_string(system.n()) +
                             " exceeds the table limit " + std::to_string(table_limit));
}

}  // namespace

OutcomeVector outcome_from_index(std::uint64_t index, std::size_t n) {
    if (n > 64) throw std::invalid_argument("outcome index holds at most 64 bits");
    OutcomeVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::uint8_t>((index >> i) & 1U);
    return y;
}

std::uint64_t outcome_index(std::span<const std::uint8_t> y) {
    if (y.size() > 64) throw std::invalid_argument("outcome index holds at most 64 bits");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) index |= std::uint64_t{1} << i;
    return index;
}

std::optional<double> LikelihoodPair::ratio() const noexcept {
    if (a == 0.0 && b == 0.0) return std::nullopt;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a / b;
}

LikelihoodPair likelihoods(const SystemSpec& system, std::span<const std::uint8_t> y) {
    check_length(system, y);
    LikelihoodPair l{1.0, 1.0};
    const auto channels = system.channels();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int yi = y[i] ? 1 : 0;
        l.a *= channels[i].conditional(yi, 0);
        l.b *= channels[i].conditional(yi, 1);
    }
    return l;
}

int decide_from_likelihoods(const Prior& prior, LikelihoodPair l, TieBreak tie) noexcept {
    if (tie == TieBreak::TowardZero)
        return prior.rho0() * l.a < (prior.rho1() * (1.0 - kTieTolerance)) * l.b ? 1 : 0;
    return (prior.rho1() * (1.0 + kTieTolerance)) * l.b < prior.rho0() * l.a ? 0 : 1;
}

int map_decide(const SystemSpec& system, std::span<const std::uint8_t> y, TieBreak tie) {
    require_canonical(system);
    return decide_from_likelihoods(system.prior(), likelihoods(system, y), tie);
}

std::vector<LlrWeight> llr_weights(const SystemSpec& system) {
    require_canonical(system);
    std::vector<LlrWeight> w;
    w.reserve(system.n());
    for (const Channel& c : system.channels())
        w.push_back({log_ratio(c.alpha, 1.0 - c.beta), log_ratio(1.0 - c.alpha, c.beta)});
    return w;
}

int llr_decide(const SystemSpec& system, std::span<const LlrWeight> weights,
               std::span<const std::uint8_t> y) {
    check_length(system, y);
    if (weights.size() != system.n())
        throw std::invalid_argument("one LLR weight per channel is required");
    bool plus_inf = false;
    bool minus_inf = false;
    bool undefined = false;
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = weights[i](y[i] ? 1 : 0);
        if (std::isnan(w)) undefined = true;
        else if (w == std::numeric_limits<double>::infinity()) plus_inf = true;
        else if (w == -std::numeric_limits<double>::infinity()) minus_inf = true;
        else sum += w;
    }
    if (undefined || (plus_inf && minus_inf))
        return decide_from_likelihoods(system.prior(), likelihoods(system, y));
    if (minus_inf) return 1;
    if (plus_inf) return 0;
    const Prior& p = system.prior();
    return sum < std::log(p.rho1() / p.rho0()) + std::log1p(-kTieTolerance) ? 1 : 0;
}

DecisionPolicy DecisionPolicy::map(SystemSpec system, TieBreak tie) {
    require_canonical(system);
    DecisionPolicy p(std::move(system), Kind::Map);
    p.tie_ = tie;
    return p;
}

DecisionPolicy DecisionPolicy::constant(SystemSpec system, int decision) {
    if (decision != 0 && decision != 1) throw std::invalid_argument("decision must be 0 or 1");
    DecisionPolicy p(std::move(system), Kind::Constant);
    p.constant_ = decision;
    return p;
}

DecisionPolicy DecisionPolicy::from_table(SystemSpec system, std::vector<std::uint8_t> table) {
    if (system.n() >= 64 || table.size() != (std::size_t{1} << system.n()))
        throw std::invalid_argument("policy table size does not match 2^n for n = " +
                                    std::to_string(system.n()));
    for (std::uint8_t v : table)
        if (v > 1) throw std::invalid_argument("policy table entries must be 0 or 1");
    DecisionPolicy p(std::move(system), Kind::Table);
    p.table_ = std::move(table);
    return p;
}

int DecisionPolicy::decide(std::span<const std::uint8_t> y) const {
    check_length(system_, y);
    switch (kind_) {
        case Kind::Table: return table_[outcome_index(y)];
        case Kind::Constant: return constant_;
        case Kind::Map: break;
    }
    return decide_from_likelihoods(system_.prior(), likelihoods(system_, y), tie_);
}

int DecisionPolicy::decide_index(std::uint64_t index) const {
    switch (kind_) {
        case Kind::Table: return table_.at(index);
        case Kind::Constant: return constant_;
        case Kind::Map: break;
    }
    const auto y = outcome_from_index(index, system_.n());
    return decide_from_likelihoods(system_.prior(), likelihoods(system_, y), tie_);
}

DecisionPolicy policy_table(const SystemSpec& system, TieBreak tie, std::size_t table_limit) {
    require_canonical(system);
    check_table_size(system, table_limit);
    const OutcomeEnumerator e(system, {.max_channels = table_limit});
    std::vector<std::uint8_t> table(std::size_t{1} << system.n());
    const Prior& p = system.prior();
    if (tie == TieBreak::TowardZero) {
        e.less_mask(p.rho0(), p.rho1() * (1.0 - kTieTolerance), table);
    } else {
        // decide 0 iff rho1*(1+tol)*B < rho0*A
        e.greater_mask(p.rho0(), p.rho1() * (1.0 + kTieTolerance), table);
        for (auto& bit : table) bit ^= 1U;
    }
    return DecisionPolicy::from_table(system, std::move(table));
}

DecisionPolicy constant_policy_table(const SystemSpec& system, int decision,
                                     std::size_t table_limit) {
    if (decision != 0 && decision != 1) throw std::invalid_argument("decision must be 0 or 1");
    check_table_size(system, table_limit);
    return DecisionPolicy::from_table(
        system, std::vector<std::uint8_t>(std::size_t{1} << system.n(),
                                          static_cast<std::uint8_t>(decision)));
}

}  // namespace biasfuse
