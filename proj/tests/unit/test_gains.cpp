#include <doctest.h>

#include <cmath>

#include "biasfuse/error_analysis.hpp"
#include "biasfuse/gains.hpp"
#include "oracle.hpp"

using namespace biasfuse;

namespace {

// Unbiased P_e by the binomial sum in long double, fully-biased by the
// product formula; independent of the library paths.
double oracle_log_gain(std::size_t n, double rho0, double r) {
    const long double rho1 = 1.0L - rho0;
    long double pu = 0.0L;
    for (unsigned k = 0; k <= n; ++k) {
        const long double a = rho0 * std::pow(static_cast<long double>(r), k) * std::pow(1.0L - r, n - k);
        const long double b = rho1 * std::pow(1.0L - r, k) * std::pow(static_cast<long double>(r), n - k);
        pu += oracle::choose(static_cast<unsigned>(n), k) * std::min(a, b);
    }
    const long double pf = std::min(rho0 * std::pow(r / static_cast<long double>(rho0), n), rho1);
    return static_cast<double>(std::log(pu) - std::log(pf));
}

}  // namespace

TEST_CASE("gain_bounds example n=4") {
    const auto g = gain_bounds(4, Prior(0.6), 0.3);
    CHECK(g.m == 2);
    CHECK(g.c == doctest::Approx(7.0 / 3.0));
    CHECK(std::log(4.0 * 0.36 * g.c) == doctest::Approx(1.2119).epsilon(1e-4));
    CHECK(g.log_gain_upper == doctest::Approx(4.7264).epsilon(1e-4));
    CHECK(g.log_gain_lower == doctest::Approx(-0.5719).epsilon(1e-3));
    // ln(0.18954 / 0.0375)
    CHECK(g.exact_log_gain == doctest::Approx(std::log(0.18954 / 0.0375)).epsilon(1e-12));
    CHECK(g.exact_log_gain == doctest::Approx(1.6203).epsilon(1e-4));
    CHECK(g.log_gain_lower <= g.exact_log_gain);
    CHECK(g.exact_log_gain <= g.log_gain_upper);
}

TEST_CASE("no gain at rho0 = r = 1/2") {
    for (std::size_t n : {2u, 10u, 50u, 300u}) {
        const auto g = gain_bounds(n, Prior(0.5), 0.5);
        CHECK(std::abs(g.asymptotic_rate) <= 1e-15);
        CHECK(std::abs(g.exact_log_gain) <= 1e-9);
    }
}

TEST_CASE("asymptotic rate") {
    CHECK(asymptotic_gain_rate(Prior(0.6), 0.3) == doctest::Approx(0.5 * std::log(3.36)).epsilon(1e-14));
    CHECK(asymptotic_gain_rate(Prior(0.6), 0.3) == doctest::Approx(0.6060).epsilon(1e-4));
}

TEST_CASE("gain argument checks") {
    CHECK_THROWS_AS(gain_bounds(1, Prior(0.6), 0.3), std::invalid_argument);
    CHECK_THROWS_AS(gain_bounds(4, Prior(0.6), 0.6), std::invalid_argument);
    CHECK_THROWS_AS(gain_bounds(4, Prior(0.4, 0.6), 0.3), std::invalid_argument);
}

TEST_CASE("exact_gain_ratio") {
    CHECK(exact_gain_ratio(5, Prior(0.6), 0.3).ratio == doctest::Approx(0.16308 / 0.01875).epsilon(1e-12));
    CHECK(exact_gain_ratio(5, Prior(0.6), 0.3).ratio == doctest::Approx(8.698).epsilon(1e-4));
    CHECK(exact_gain_ratio(1, Prior(0.6), 0.3).ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact_gain_ratio(4, Prior(0.6), 0.3).ratio == doctest::Approx(5.0544).epsilon(1e-4));
    const auto big = exact_gain_ratio(2000, Prior(0.6), 0.1);
    CHECK(std::isfinite(big.log_ratio));
    CHECK(big.ratio == std::numeric_limits<double>::infinity());
}

TEST_CASE("bounds sandwich the exact gain on the parameter grid") {
    for (std::size_t n = 2; n <= 24; ++n) {
        for (double rho0 : {0.5, 0.6, 0.75, 0.9}) {
            for (double r : {0.1, 0.2, 0.3, 0.4, 0.5}) {
                const auto g = gain_bounds(n, Prior(rho0), r);
                CHECK(g.exact_log_gain == doctest::Approx(oracle_log_gain(n, rho0, r)).epsilon(1e-10));
                CHECK(g.log_gain_lower <= g.exact_log_gain + 1e-9);
                CHECK(g.exact_log_gain <= g.log_gain_upper + 1e-9);
            }
        }
    }
}

TEST_CASE("gain eventually grows when 4 rho0^2 c > 1") {
    for (double rho0 : {0.5, 0.6, 0.75, 0.9}) {
        for (double r : {0.1, 0.2, 0.3, 0.4}) {
            if (4.0 * rho0 * rho0 * (1.0 / r - 1.0) <= 1.0) continue;
            std::vector<double> g;
            for (std::size_t n = 2; n <= 400; ++n) g.push_back(gain_bounds(n, Prior(rho0), r).exact_log_gain);
            CHECK(g.back() > 0.0);
            // increasing over the last stretch (the floor(n/2) parity ripple aside)
            for (std::size_t i = g.size() - 100; i + 2 < g.size(); ++i) CHECK(g[i + 2] > g[i]);
        }
    }
}

TEST_CASE("convergence_table") {
    const std::vector<std::size_t> ns{50, 100, 200, 400};
    for (double rho0 : {0.5, 0.6, 0.75, 0.9}) {
        for (double r : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            const auto rows = convergence_table(Prior(rho0), r, ns);
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& row : rows) {
                CHECK(row.rate_lower <= row.rate_exact + 1e-9);
                CHECK(row.rate_exact <= row.rate_upper + 1e-9);
                const double gap = std::abs(row.rate_exact - row.rate_asymptotic);
                CHECK(gap <= prev + 1e-3);
                prev = gap;
            }
        }
    }
    const std::vector<std::size_t> n200{200};
    const auto row = convergence_table(Prior(0.6), 0.3, n200).front();
    CHECK(std::abs(row.rate_exact - 0.5 * std::log(3.36)) <= 0.05);

    const auto flat = convergence_table(Prior(0.5), 0.5, ns);
    for (const auto& r : flat) {
        CHECK(std::abs(r.rate_exact) <= 1e-9);
        CHECK(std::abs(r.rate_asymptotic) <= 1e-9);
    }
    const std::vector<std::size_t> bad{4, 3};
    CHECK_THROWS_AS(convergence_table(Prior(0.6), 0.3, bad), std::invalid_argument);
}

TEST_CASE("claim1_check") {
    // m=1: C(3,1)=3 < 4, C(2,1)=2 = 4*(1/2); m=2: C(5,2)=10 < 12, C(4,2)=6 = 16*(1/2)(3/4)
    for (std::size_t m = 1; m <= kClaim1MaxM; ++m) {
        const auto c = claim1_check(m);
        CHECK(c.inequality);
        CHECK(c.product_identity);
    }
    CHECK_THROWS_AS(claim1_check(0), std::invalid_argument);
    CHECK_THROWS_AS(claim1_check(65), std::invalid_argument);
}
