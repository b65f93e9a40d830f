#pragma once
// Brute-force reference computations for tests. Deliberately naive: plain
// loops over outcomes in long double, no shared code with the library's
// enumeration engine.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

struct Ch {
    long double alpha;
    long double beta;
};

inline long double prob_given0(const std::vector<Ch>& ch, std::uint64_t y) {
    long double p = 1.0L;
    for (std::size_t i = 0; i < ch.size(); ++i) p *= ((y >> i) & 1U) ? ch[i].alpha : 1.0L - ch[i].alpha;
    return p;
}

inline long double prob_given1(const std::vector<Ch>& ch, std::uint64_t y) {
    long double p = 1.0L;
    for (std::size_t i = 0; i < ch.size(); ++i) p *= ((y >> i) & 1U) ? 1.0L - ch[i].beta : ch[i].beta;
    return p;
}

/// sum_y min(rho0 A, rho1 B)
inline long double min_error(long double rho0, const std::vector<Ch>& ch) {
    const long double rho1 = 1.0L - rho0;
    long double s = 0.0L;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << ch.size()); ++y) {
        const long double a = rho0 * prob_given0(ch, y);
        const long double b = rho1 * prob_given1(ch, y);
        s += a < b ? a : b;
    }
    return s;
}

/// Error of an explicit table: decide 1 costs rho0 A, decide 0 costs rho1 B.
inline long double table_error(long double rho0, const std::vector<Ch>& ch,
                               const std::vector<std::uint8_t>& table) {
    const long double rho1 = 1.0L - rho0;
    long double s = 0.0L;
    for (std::uint64_t y = 0; y < table.size(); ++y)
        s += table[y] ? rho0 * prob_given0(ch, y) : rho1 * prob_given1(ch, y);
    return s;
}

inline long double choose(unsigned n, unsigned k) {
    long double c = 1.0L;
    for (unsigned j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

/// Random canonical system: rho0 in [0.5, 0.95], each r_i in [0, 1/2],
/// alpha uniform on its feasible interval.
struct RandomSystem {
    double rho0;
    std::vector<std::pair<double, double>> channels;  // (alpha, beta)
    std::vector<double> rates;
};

inline RandomSystem random_canonical(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomSystem s;
    s.rho0 = 0.5 + 0.45 * u(gen);
    const double rho1 = 1.0 - s.rho0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 0.5 * u(gen);
        const double lo = std::max(0.0, (r - rho1) / s.rho0);
        const double hi = r / s.rho0;
        const double a = lo + (hi - lo) * u(gen);
        const double b = std::clamp((r - s.rho0 * a) / rho1, 0.0, 1.0);
        s.channels.emplace_back(a, b);
        s.rates.push_back(r);
    }
    return s;
}

}  // namespace oracle
