#pragma once

#include <random>
#include <vector>

#include "biasfuse/model.hpp"
#include "oracle.hpp"

namespace testing_support {

inline biasfuse::SystemSpec to_system(const oracle::RandomSystem& r) {
    std::vector<biasfuse::Channel> ch;
    for (auto [a, b] : r.channels) ch.emplace_back(a, b);
    return biasfuse::SystemSpec(biasfuse::Prior(r.rho0), std::move(ch));
}

inline std::vector<oracle::Ch> to_oracle(const biasfuse::SystemSpec& s) {
    std::vector<oracle::Ch> ch;
    for (const auto& c : s.channels()) ch.push_back({c.alpha, c.beta});
    return ch;
}

/// Random canonical system with every parameter strictly inside (0,1).
inline biasfuse::SystemSpec random_interior_system(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (;;) {
        const double rho0 = 0.5 + 0.45 * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
        std::vector<biasfuse::Channel> ch;
        for (std::size_t i = 0; i < n; ++i) ch.emplace_back(u(gen), u(gen));
        biasfuse::SystemSpec s(biasfuse::Prior(rho0), std::move(ch));
        auto c = biasfuse::canonicalize(s).system;
        bool interior = true;
        for (const auto& x : c.channels())
            interior = interior && x.alpha > 0.0 && x.alpha < 1.0 && x.beta > 0.0 && x.beta < 1.0;
        if (interior) return c;
    }
}

}  // namespace testing_support
