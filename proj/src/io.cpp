#include "biasfuse/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "biasfuse/errors.hpp"

namespace biasfuse::io {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
    const auto pos = kAlphabet.find(c);
    if (pos == std::string_view::npos) throw ParseError(std::string("invalid base64 character '") + c + "'");
    return static_cast<int>(pos);
}

template <typename T>
T required(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field \"") + key + "\": " + e.what());
    }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t v = bytes[i] << 16;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw ParseError("base64 length must be a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        const bool last = i + 4 == text.size();
        const int pad = (text[i + 3] == '=') + (text[i + 2] == '=');
        if (pad > 0 && !last) throw ParseError("base64 padding before the end of input");
        if (text[i + 2] == '=' && text[i + 3] != '=') throw ParseError("malformed base64 padding");
        std::uint32_t v = (decode_char(text[i]) << 18) | (decode_char(text[i + 1]) << 12);
        if (pad < 2) v |= decode_char(text[i + 2]) << 6;
        if (pad < 1) v |= decode_char(text[i + 3]);
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
    return out;
}

std::string format_double(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

Json system_to_json(const SystemSpec& system) {
    Json j;
    j["n"] = system.n();
    j["rho0"] = system.prior().rho0();
    Json alpha = Json::array();
    Json beta = Json::array();
    for (const Channel& c : system.channels()) {
        alpha.push_back(c.alpha);
        beta.push_back(c.beta);
    }
    j["alpha"] = std::move(alpha);
    j["beta"] = std::move(beta);
    return j;
}

SystemSpec system_from_json(const Json& j) {
    const auto n = required<std::int64_t>(j, "n");
    const auto rho0 = required<double>(j, "rho0");
    const auto alpha = required<std::vector<double>>(j, "alpha");
    const auto beta = required<std::vector<double>>(j, "beta");
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (alpha.size() != static_cast<std::size_t>(n) || beta.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("alpha and beta must both have n entries");
    std::vector<Channel> channels;
    channels.reserve(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) channels.emplace_back(alpha[i], beta[i]);
    return SystemSpec(Prior(rho0), std::move(channels));
}

Json policy_to_json(const DecisionPolicy& policy) {
    const std::size_t n = policy.system().n();
    const std::size_t count = std::size_t{1} << n;
    std::vector<std::uint8_t> bytes((count + 7) / 8, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const int bit = policy.has_table() ? policy.table()[idx] : policy.decide_index(idx);
        if (bit) bytes[idx / 8] |= static_cast<std::uint8_t>(1U << (idx % 8));
    }
    Json j;
    j["n"] = n;
    j["bits"] = base64_encode(bytes);
    return j;
}

DecisionPolicy policy_from_json(const Json& j, const SystemSpec& system) {
    const auto n = required<std::int64_t>(j, "n");
    const auto bits = required<std::string>(j, "bits");
    if (n < 0 || static_cast<std::size_t>(n) != system.n())
        throw std::invalid_argument("policy table is for n = " + std::to_string(n) +
                                    " but the system has n = " + std::to_string(system.n()));
    if (n > static_cast<std::int64_t>(kDefaultTableLimit))
        throw std::invalid_argument("policy table n exceeds the table limit");
    const std::size_t count = std::size_t{1} << n;
    const auto bytes = base64_decode(bits);
    if (bytes.size() != (count + 7) / 8)
        throw std::invalid_argument("policy bit string has the wrong length for n");
    std::vector<std::uint8_t> table(count);
    for (std::size_t idx = 0; idx < count; ++idx) table[idx] = (bytes[idx / 8] >> (idx % 8)) & 1U;
    return DecisionPolicy::from_table(system, std::move(table));
}

Json sim_result_to_json(const SimResult& r) {
    Json j;
    j["trials"] = r.trials;
    j["errors"] = r.errors;
    j["empirical_error"] = r.empirical_error;
    j["std_error"] = r.std_error;
    j["seed"] = r.seed;
    return j;
}

Json error_report_to_json(const ErrorReport& r) {
    Json j;
    j["p_error"] = r.p_error;
    if (std::isfinite(r.log_p_error)) j["log_p_error"] = r.log_p_error;
    else j["log_p_error"] = nullptr;  // ln 0
    j["method"] = std::string(method_name(r.method));
    return j;
}

void write_sweep_csv(std::ostream& out, const BiasSweep& sweep) {
    out << "alpha_k,beta_k,p_error\n";
    for (std::size_t i = 0; i < sweep.alpha_grid.size(); ++i) {
        out << format_double(sweep.alpha_grid[i]) << ',' << format_double(sweep.beta_grid[i]) << ','
            << format_double(sweep.p_error_at[i]) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
    out << "n,rate_exact,rate_lower,rate_upper,rate_asymptotic\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.rate_exact) << ',' << format_double(r.rate_lower) << ','
            << format_double(r.rate_upper) << ',' << format_double(r.rate_asymptotic) << '\n';
    }
}

}  // namespace biasfuse::io
