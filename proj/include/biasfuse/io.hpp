#pragma once
// Serialized forms of systems, policy tables, simulation results, bias
// sweeps and convergence tables.
//
//   system  {"n", "rho0", "alpha": [...], "beta": [...]}   (field order fixed)
//   policy  {"n", "bits": base64 of the little-endian bit string, 2^n bits}
//   sim     {"trials", "errors", "empirical_error", "std_error", "seed"}
//   sweep   CSV alpha_k,beta_k,p_error
//   gains   CSV n,rate_exact,rate_lower,rate_upper,rate_asymptotic
// CSV floats carry 17 significant digits.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biasfuse/decision.hpp"
#include "biasfuse/error_analysis.hpp"
#include "biasfuse/gains.hpp"
#include "biasfuse/model.hpp"
#include "biasfuse/montecarlo.hpp"

namespace biasfuse::io {

using Json = nlohmann::ordered_json;

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ParseError on characters outside the standard alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// "%.17g"
std::string format_double(double v);

Json system_to_json(const SystemSpec& system);
/// ParseError for missing or mistyped fields; std::invalid_argument when
/// the values do not form a valid system (length mismatch, bad probability).
SystemSpec system_from_json(const Json& j);

Json policy_to_json(const DecisionPolicy& policy);
/// The policy's n must match the system's (std::invalid_argument otherwise).
DecisionPolicy policy_from_json(const Json& j, const SystemSpec& system);

Json sim_result_to_json(const SimResult& r);
Json error_report_to_json(const ErrorReport& r);

void write_sweep_csv(std::ostream& out, const BiasSweep& sweep);
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

}  // namespace biasfuse::io
