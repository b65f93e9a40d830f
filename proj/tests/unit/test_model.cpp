#include <doctest.h>

#include <random>

#include "biasfuse/decision.hpp"
#include "biasfuse/error_analysis.hpp"
#include "biasfuse/model.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace biasfuse;

TEST_CASE("error_rate") {
    const Prior p(0.6);
    CHECK(error_rate(Channel(0.5, 0.5), p) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(error_rate(Channel(0.5, 0.0), p) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(error_rate(Channel(0.0, 0.0), p) == 0.0);
}

TEST_CASE("prior and channel validation") {
    CHECK_THROWS_AS(Prior(1.2), std::invalid_argument);
    CHECK_THROWS_AS(Prior(0.6, 0.5), std::invalid_argument);
    CHECK_NOTHROW(Prior(0.6, 0.4));
    CHECK(Prior(1.0).degenerate());
    CHECK_THROWS_AS(Channel(-0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(SystemSpec(Prior(1.0), {Channel(0.1, 0.1)}), std::invalid_argument);
    CHECK_THROWS_AS(SystemSpec(Prior(0.6), {}), std::invalid_argument);

    CHECK(Channel(0.3, 0.3).kind() == ChannelKind::Unbiased);
    CHECK(Channel(0.5, 0.0).kind() == ChannelKind::SChannel);
    CHECK(Channel(0.0, 0.4).kind() == ChannelKind::ZChannel);
    CHECK(Channel(0.2, 0.4).kind() == ChannelKind::Biased);
}

TEST_CASE("canonicalize examples") {
    SUBCASE("output flip maps r to 1 - r") {
        const SystemSpec s(Prior(0.6), {Channel(0.9, 0.8)});
        CHECK(error_rate(s.channel(0), s.prior()) == doctest::Approx(0.86));
        const auto c = canonicalize(s);
        CHECK(c.system.channel(0).alpha == doctest::Approx(0.1));
        CHECK(c.system.channel(0).beta == doctest::Approx(0.2));
        CHECK(c.system.rates()[0] == doctest::Approx(0.14));
        CHECK_FALSE(c.transform.labels_swapped);
        CHECK(c.transform.flipped == std::vector<bool>{true});
    }
    SUBCASE("label swap exchanges alpha and beta") {
        const SystemSpec s(Prior(0.4, 0.6), {Channel(0.2, 0.1)});
        const auto c = canonicalize(s);
        CHECK(c.system.prior().rho0() == doctest::Approx(0.6));
        CHECK(c.system.channel(0).alpha == doctest::Approx(0.1));
        CHECK(c.system.channel(0).beta == doctest::Approx(0.2));
        CHECK(c.transform.labels_swapped);
        CHECK(c.transform.flipped == std::vector<bool>{false});
    }
    SUBCASE("canonical input is unchanged") {
        const SystemSpec s(Prior(0.7), {Channel(0.1, 0.3), Channel(0.2, 0.2)});
        const auto c = canonicalize(s);
        CHECK(c.system == s);
        CHECK(c.transform.identity());
    }
}

TEST_CASE("canonicalize: idempotent, preserves P_e, maps decisions back") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const double rho0 = 0.05 + 0.9 * u(gen);
        std::vector<Channel> ch;
        for (std::size_t i = 0; i < n; ++i) ch.emplace_back(u(gen), u(gen));
        const SystemSpec s(Prior(rho0), ch);
        const auto c = canonicalize(s);
        REQUIRE(c.system.canonical());

        const auto again = canonicalize(c.system);
        CHECK(again.transform.identity());
        CHECK(again.system == c.system);

        const double before = static_cast<double>(oracle::min_error(rho0, testing_support::to_oracle(s)));
        CHECK(exact_error_probability(c.system).p_error == doctest::Approx(before).epsilon(1e-12));

        // The canonical MAP decision, mapped back, is MAP for the original labels.
        const auto och = testing_support::to_oracle(s);
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
            const long double a = rho0 * oracle::prob_given0(och, idx);
            const long double b = (1.0L - rho0) * oracle::prob_given1(och, idx);
            if (std::abs(static_cast<double>(a - b)) < 1e-9) continue;  // near-tie: both optimal
            const auto y = outcome_from_index(idx, n);
            const int d = c.transform.decision_to_original(map_decide(c.system, c.transform.to_canonical(y)));
            CHECK(d == (a < b ? 1 : 0));
        }
    }
}

TEST_CASE("make_unbiased_system") {
    const auto s = make_unbiased_system(5, Prior(0.6), 0.3);
    CHECK(s.n() == 5);
    for (const auto& c : s.channels()) CHECK(c == Channel(0.3, 0.3));
    CHECK(make_unbiased_system(1, Prior(0.5), 0.5).channel(0) == Channel(0.5, 0.5));
    const auto two = make_unbiased_system(2, Prior(0.8), 0.1);
    CHECK(two.channel(1) == Channel(0.1, 0.1));
    CHECK_THROWS_AS(make_unbiased_system(3, Prior(0.6), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_unbiased_system(3, Prior(0.6), 0.51), std::invalid_argument);
}

TEST_CASE("make_fully_biased_system") {
    const auto s = make_fully_biased_system(5, Prior(0.6), 0.3);
    for (const auto& c : s.channels()) {
        CHECK(c.alpha == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(c.beta == 0.0);
    }
    CHECK(make_fully_biased_system(1, Prior(0.5), 0.5).channel(0) == Channel(1.0, 0.0));
    const std::vector<double> rates{0.15, 0.3};
    const auto two = make_fully_biased_system(Prior(0.75), rates);
    CHECK(two.channel(0).alpha == doctest::Approx(0.2));
    CHECK(two.channel(1).alpha == doctest::Approx(0.4));
    CHECK_THROWS_AS(make_fully_biased_system(1, Prior(0.4, 0.6), 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_fully_biased_system(1, Prior(0.6), 0.7), std::invalid_argument);
}

TEST_CASE("fully-biased rates are reproduced exactly") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const Prior p(0.5 + 0.5 * u(gen) * 0.999);
        std::vector<double> rates(1 + t % 8);
        for (auto& r : rates) r = 0.5 * u(gen);
        const auto s = make_fully_biased_system(p, rates);
        for (std::size_t i = 0; i < rates.size(); ++i)
            CHECK(std::abs(error_rate(s.channel(i), p) - rates[i]) <= 1e-15);
    }
}

TEST_CASE("random_system_with_rates") {
    const Prior p(0.6);
    const std::vector<double> rates(5, 0.3);
    const auto a = random_system_with_rates(p, rates, 42);
    for (const auto& c : a.channels()) {
        CHECK(c.alpha >= 0.0);
        CHECK(c.alpha <= 0.5 + 1e-15);
        CHECK(c.beta >= 0.0);
        CHECK(c.beta <= 0.75 + 1e-15);
        CHECK(std::abs(error_rate(c, p) - 0.3) <= 1e-12);
    }
    CHECK(random_system_with_rates(p, rates, 42) == a);
    CHECK_FALSE(random_system_with_rates(p, rates, 43) == a);

    // beta in [0,1] gives alpha in [(0.45 - 0.4)/0.6, 0.45/0.6].
    const auto range = feasible_alpha_range(p, 0.45);
    CHECK(range.lo == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(range.hi == doctest::Approx(0.75).epsilon(1e-14));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::vector<double> one{0.45};
        const auto s = random_system_with_rates(p, one, seed);
        CHECK(s.channel(0).alpha >= range.lo);
        CHECK(s.channel(0).alpha <= range.hi);
    }
    CHECK_THROWS_AS(random_system_with_rates(Prior(1.0), rates, 1), std::invalid_argument);
}

TEST_CASE("random_system_with_rates satisfies invariants") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const Prior p(0.5 + 0.49 * u(gen));
        std::vector<double> rates(1 + t % 7);
        for (auto& r : rates) r = 0.5 * u(gen);
        const auto s = random_system_with_rates(p, rates, gen());
        CHECK(s.canonical());
        for (std::size_t i = 0; i < rates.size(); ++i)
            CHECK(std::abs(error_rate(s.channel(i), p) - rates[i]) <= 1e-12);
    }
}
