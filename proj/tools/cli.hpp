#pragma once
// Command-line front end: pe, hist, gains, sweep, simulate, claim1.
//
// Exit codes: 0 success, 2 usage or parse error, 3 size guard,
// 4 inconsistent input.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biasfuse/model.hpp"

namespace biasfuse::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitSizeGuard = 3,
    kExitInconsistent = 4,
};

inline constexpr std::size_t kMaxHistogramChannels = 12;

struct HistogramBin {
    double lo;
    double hi;
    std::uint64_t count;
};

/// Exact P_e of `samples` random systems with every rate equal to r. Bins
/// span [fully-biased error, rho1].
struct FixedRateHistogram {
    double min = 0.0;
    double max = 0.0;
    double fully_biased = 0.0;
    double unbiased = 0.0;
    std::vector<double> values;
    std::vector<HistogramBin> bins;
};

FixedRateHistogram fixed_rate_histogram(std::size_t n, const Prior& prior, double r,
                                        std::uint64_t samples, std::uint64_t seed,
                                        std::size_t bins);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biasfuse::cli
