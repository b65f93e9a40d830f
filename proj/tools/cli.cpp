#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "biasfuse/decision.hpp"
#include "biasfuse/error_analysis.hpp"
#include "biasfuse/errors.hpp"
#include "biasfuse/gains.hpp"
#include "biasfuse/io.hpp"
#include "biasfuse/montecarlo.hpp"
#include "biasfuse/rng.hpp"

namespace biasfuse::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalFlags {
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format;  // empty: command default
};

struct SystemFlags {
    std::string spec_path;
    std::size_t n = 0;
    double rho0 = 0.5;
    std::vector<double> alpha;
    std::vector<double> beta;
    double unbiased_r = 0.0;
    double fully_biased_r = 0.0;

    CLI::Option* spec_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* rho0_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* unbiased_opt = nullptr;
    CLI::Option* fully_biased_opt = nullptr;
};

void add_system_flags(CLI::App* sub, SystemFlags& f) {
    f.spec_opt = sub->add_option("--spec", f.spec_path, "System JSON file {n, rho0, alpha, beta}");
    f.n_opt = sub->add_option("--n", f.n, "Number of channels");
    f.rho0_opt = sub->add_option("--rho0", f.rho0, "Prior probability of X = 0");
    f.alpha_opt = sub->add_option("--alpha", f.alpha, "Comma-separated alpha_i")->delimiter(',');
    f.beta_opt = sub->add_option("--beta", f.beta, "Comma-separated beta_i")->delimiter(',');
    f.unbiased_opt = sub->add_option("--unbiased-r", f.unbiased_r, "n unbiased channels at rate r");
    f.fully_biased_opt =
        sub->add_option("--fully-biased-r", f.fully_biased_r, "n S-channels at rate r");
    f.spec_opt->excludes(f.n_opt, f.rho0_opt, f.alpha_opt, f.beta_opt, f.unbiased_opt,
                         f.fully_biased_opt);
    f.unbiased_opt->excludes(f.fully_biased_opt, f.alpha_opt, f.beta_opt);
    f.fully_biased_opt->excludes(f.alpha_opt, f.beta_opt);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

SystemSpec build_system(const SystemFlags& f) {
    if (*f.spec_opt) return io::system_from_json(read_json_file(f.spec_path));
    if (!*f.rho0_opt) throw UsageError("--rho0 is required without --spec");
    const Prior prior(f.rho0);
    if (*f.unbiased_opt || *f.fully_biased_opt) {
        if (!*f.n_opt) throw UsageError("--n is required with the rate shorthands");
        if (*f.unbiased_opt) return make_unbiased_system(f.n, prior, f.unbiased_r);
        return make_fully_biased_system(f.n, prior, f.fully_biased_r);
    }
    if (!*f.alpha_opt || !*f.beta_opt)
        throw UsageError("give --spec, --alpha with --beta, or a rate shorthand");
    if (f.alpha.size() != f.beta.size())
        throw std::invalid_argument("--alpha and --beta need the same number of entries");
    if (*f.n_opt && f.n != f.alpha.size())
        throw std::invalid_argument("--n does not match the number of channels given");
    std::vector<Channel> channels;
    for (std::size_t i = 0; i < f.alpha.size(); ++i) channels.emplace_back(f.alpha[i], f.beta[i]);
    return SystemSpec(prior, std::move(channels));
}

Json transform_to_json(const CanonicalTransform& t) {
    Json j;
    j["labels_swapped"] = t.labels_swapped;
    Json flipped = Json::array();
    for (std::size_t i = 0; i < t.flipped.size(); ++i)
        if (t.flipped[i]) flipped.push_back(i);
    j["flipped_channels"] = std::move(flipped);
    return j;
}

// Best available method for a canonical system.
ErrorReport best_error_report(const SystemSpec& s) {
    if (s.all_s_channels()) {
        const auto rates = s.rates();
        return fully_biased_error(s.prior(), rates).report;
    }
    if (s.all_identical()) {
        const Channel& c = s.channel(0);
        ErrorReport direct = identical_error_probability(s.n(), s.prior(), c.alpha, c.beta);
        if (direct.p_error > 0.0 && std::isnormal(direct.p_error)) return direct;
        return log_identical_error_probability(s.n(), s.prior(), c.alpha, c.beta);
    }
    return exact_error_probability(s);
}

std::string join_results(const CLI::Option* opt) {
    std::string s;
    for (const auto& r : opt->results()) {
        if (!s.empty()) s += ',';
        s += r;
    }
    return s;
}

Json manifest(const CLI::App& app, const CLI::App& sub, const GlobalFlags& g) {
    Json params = Json::object();
    for (const CLI::App* a : {&app, &sub}) {
        for (const CLI::Option* opt : a->get_options()) {
            if (opt->count() == 0 || opt->get_name() == "--help") continue;
            params[opt->get_name()] = join_results(opt);
        }
    }
    Json j;
    j["command"] = sub.get_name();
    j["parameters"] = std::move(params);
    j["output"] = g.out_path;
    j["seed"] = g.seed;
    j["tool_version"] = kToolVersion;
    return j;
}

void emit(const std::string& body, const CLI::App& app, const CLI::App& sub,
          const GlobalFlags& g, std::ostream& out) {
    if (g.out_path.empty()) {
        out << body;
        return;
    }
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + g.out_path);
    file << body;
    std::ofstream side(g.out_path + ".manifest.json", std::ios::binary);
    if (!side) throw UsageError("cannot write " + g.out_path + ".manifest.json");
    side << manifest(app, sub, g).dump(2) << '\n';
}

std::string format_or(const GlobalFlags& g, const char* fallback) {
    return g.format.empty() ? fallback : g.format;
}

// Policy table for the original labels of `system`, derived from the MAP
// table of its canonical form.
DecisionPolicy map_policy_for(const SystemSpec& system) {
    const auto [canon, transform] = canonicalize(system);
    const DecisionPolicy canonical_table = policy_table(canon);
    if (transform.identity()) return DecisionPolicy::from_table(system, {canonical_table.table().begin(), canonical_table.table().end()});
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < system.n(); ++i)
        if (transform.flipped[i] != transform.labels_swapped) mask |= std::uint64_t{1} << i;
    std::vector<std::uint8_t> table(canonical_table.table().size());
    for (std::uint64_t idx = 0; idx < table.size(); ++idx)
        table[idx] = static_cast<std::uint8_t>(
            transform.decision_to_original(canonical_table.table()[idx ^ mask]));
    return DecisionPolicy::from_table(system, std::move(table));
}

}  // namespace

FixedRateHistogram fixed_rate_histogram(std::size_t n, const Prior& prior, double r,
                                        std::uint64_t samples, std::uint64_t seed,
                                        std::size_t bins) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (n > kMaxHistogramChannels)
        throw SizeGuardError("histograms are limited to n <= " + std::to_string(kMaxHistogramChannels));
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    if (bins == 0) throw std::invalid_argument("bins must be positive");
    if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("rate must lie in (0, 1/2]");

    FixedRateHistogram h;
    h.fully_biased = fully_biased_error(n, prior, r).report.p_error;
    h.unbiased = exact_error_probability(make_unbiased_system(n, prior, r)).p_error;
    const std::vector<double> rates(n, r);
    const CounterRng root(seed);
    h.values.reserve(samples);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const SystemSpec sys = random_system_with_rates(prior, rates, root.split(s).key());
        h.values.push_back(exact_error_probability(sys).p_error);
    }
    const auto [lo, hi] = std::minmax_element(h.values.begin(), h.values.end());
    h.min = *lo;
    h.max = *hi;

    const double floor = h.fully_biased;
    const double ceil = prior.rho1();
    const double width = (ceil - floor) / static_cast<double>(bins);
    h.bins.resize(bins);
    for (std::size_t b = 0; b < bins; ++b)
        h.bins[b] = {floor + width * static_cast<double>(b),
                     b + 1 == bins ? ceil : floor + width * static_cast<double>(b + 1), 0};
    for (double v : h.values) {
        std::size_t b = 0;
        if (width > 0.0) {
            const double pos = std::floor((v - floor) / width);
            b = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
        }
        ++h.bins[b].count;
    }
    return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Error-optimal decision fusion over biased binary channels", "biasfuse"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalFlags g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--out", g.out_path, "Write the result here (plus <out>.manifest.json)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.set_version_flag("--version", kToolVersion);

    // pe
    auto* pe = app.add_subcommand("pe", "Minimum error probability of a system");
    SystemFlags pe_sys;
    add_system_flags(pe, pe_sys);

    // hist
    auto* hist = app.add_subcommand("hist", "Histogram of P_e over random systems at a fixed rate");
    std::size_t hist_n = 5;
    double hist_rho0 = 0.6;
    double hist_r = 0.3;
    std::uint64_t hist_samples = 10000;
    std::size_t hist_bins = 40;
    hist->add_option("--n", hist_n, "Number of channels")->capture_default_str();
    hist->add_option("--rho0", hist_rho0, "Prior probability of X = 0")->capture_default_str();
    hist->add_option("--r", hist_r, "Common channel error rate")->capture_default_str();
    hist->add_option("--samples", hist_samples, "Random systems to draw")->capture_default_str();
    hist->add_option("--bins", hist_bins, "Histogram bins")->capture_default_str();

    // gains
    auto* gains = app.add_subcommand("gains", "Normalized log gain of S-channels over unbiased channels");
    std::vector<double> gains_rho0{0.6};
    std::vector<double> gains_r{0.3};
    std::size_t gains_n_min = 2;
    std::size_t gains_n_max = 200;
    std::size_t gains_n_step = 1;
    gains->add_option("--rho0", gains_rho0, "Comma-separated rho0 values")->delimiter(',');
    gains->add_option("--r", gains_r, "Comma-separated common rates")->delimiter(',');
    gains->add_option("--n-min", gains_n_min, "Smallest n (>= 2)")->capture_default_str();
    gains->add_option("--n-max", gains_n_max, "Largest n")->capture_default_str();
    gains->add_option("--n-step", gains_n_step, "Step in n")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "P_e along one channel's bias at a fixed rate");
    SystemFlags sweep_sys;
    add_system_flags(sweep, sweep_sys);
    std::size_t sweep_k = 0;
    std::size_t sweep_grid = 101;
    sweep->add_option("--k", sweep_k, "Channel index (0-based)")->capture_default_str();
    sweep->add_option("--grid", sweep_grid, "Grid points (>= 3)")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo error rate of a policy");
    SystemFlags sim_sys;
    add_system_flags(sim, sim_sys);
    std::uint64_t sim_trials = 100000;
    std::string sim_policy;
    std::size_t sim_workers = 1;
    sim->add_option("--trials", sim_trials, "Number of trials")->capture_default_str();
    sim->add_option("--policy", sim_policy, "Policy table JSON {n, bits}; default is MAP");
    sim->add_option("--workers", sim_workers, "Worker threads")->capture_default_str();

    // claim1
    auto* claim1 = app.add_subcommand("claim1", "Exact check of the central-binomial identities");
    std::size_t claim1_m_max = kClaim1MaxM;
    claim1->add_option("--m-max", claim1_m_max, "Check m = 1..m-max (<= 64)")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::ostringstream body;
        if (*pe) {
            const SystemSpec input = build_system(pe_sys);
            const auto [system, transform] = canonicalize(input);
            const ErrorReport report = best_error_report(system);
            const auto rates = system.rates();
            const bool condition = fully_biased_error(system.prior(), rates).condition_holds;
            if (format_or(g, "json") == "json") {
                Json j = io::error_report_to_json(report);
                j["s_bound_condition"] = condition;
                j["n"] = system.n();
                j["canonical_transform"] = transform_to_json(transform);
                body << j.dump(2) << '\n';
            } else {
                body << "p_error,log_p_error,method,s_bound_condition\n"
                     << io::format_double(report.p_error) << ',' << io::format_double(report.log_p_error)
                     << ',' << method_name(report.method) << ',' << (condition ? 1 : 0) << '\n';
            }
            emit(body.str(), app, *pe, g, out);
        } else if (*hist) {
            const Prior prior(hist_rho0);
            const auto h = fixed_rate_histogram(hist_n, prior, hist_r, hist_samples, g.seed, hist_bins);
            if (format_or(g, "csv") == "json") {
                Json j;
                j["n"] = hist_n;
                j["rho0"] = hist_rho0;
                j["r"] = hist_r;
                j["samples"] = hist_samples;
                j["seed"] = g.seed;
                j["min"] = h.min;
                j["max"] = h.max;
                j["fully_biased"] = h.fully_biased;
                j["unbiased"] = h.unbiased;
                Json bins = Json::array();
                for (const auto& b : h.bins) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
                j["bins"] = std::move(bins);
                body << j.dump(2) << '\n';
            } else {
                body << "bin_lo,bin_hi,count\n";
                for (const auto& b : h.bins)
                    body << io::format_double(b.lo) << ',' << io::format_double(b.hi) << ',' << b.count << '\n';
            }
            err << "min=" << io::format_double(h.min) << " max=" << io::format_double(h.max)
                << " fully_biased=" << io::format_double(h.fully_biased)
                << " unbiased=" << io::format_double(h.unbiased) << '\n';
            emit(body.str(), app, *hist, g, out);
        } else if (*gains) {
            if (gains_n_step == 0) throw UsageError("--n-step must be positive");
            std::vector<std::size_t> ns;
            for (std::size_t n = gains_n_min; n <= gains_n_max; n += gains_n_step) ns.push_back(n);
            const bool json = format_or(g, "csv") == "json";
            Json rows_json = Json::array();
            if (!json) body << "rho0,r,n,rate_exact,rate_lower,rate_upper,rate_asymptotic\n";
            for (double rho0 : gains_rho0) {
                for (double r : gains_r) {
                    const auto rows = convergence_table(Prior(rho0), r, ns);
                    for (const auto& row : rows) {
                        if (json) {
                            rows_json.push_back({{"rho0", rho0}, {"r", r}, {"n", row.n},
                                                 {"rate_exact", row.rate_exact},
                                                 {"rate_lower", row.rate_lower},
                                                 {"rate_upper", row.rate_upper},
                                                 {"rate_asymptotic", row.rate_asymptotic}});
                        } else {
                            body << io::format_double(rho0) << ',' << io::format_double(r) << ','
                                 << row.n << ',' << io::format_double(row.rate_exact) << ','
                                 << io::format_double(row.rate_lower) << ','
                                 << io::format_double(row.rate_upper) << ','
                                 << io::format_double(row.rate_asymptotic) << '\n';
                        }
                    }
                }
            }
            if (json) body << rows_json.dump(2) << '\n';
            emit(body.str(), app, *gains, g, out);
        } else if (*sweep) {
            const auto [system, transform] = canonicalize(build_system(sweep_sys));
            if (!transform.identity()) err << "note: system relabeled to canonical form\n";
            const BiasSweep s = bias_sweep(system, sweep_k, sweep_grid);
            const ConcavityVerdict v = check_concavity(s);
            if (format_or(g, "csv") == "json") {
                Json rows = Json::array();
                for (std::size_t i = 0; i < s.alpha_grid.size(); ++i)
                    rows.push_back({{"alpha_k", s.alpha_grid[i]}, {"beta_k", s.beta_grid[i]},
                                    {"p_error", s.p_error_at[i]}});
                Json j;
                j["channel"] = s.channel_index;
                j["rate"] = s.rate;
                j["rows"] = std::move(rows);
                j["max_second_difference"] = v.max_second_difference;
                j["concave"] = v.concave;
                if (s.local_max_row) j["local_max_row"] = *s.local_max_row;
                else j["local_max_row"] = nullptr;
                body << j.dump(2) << '\n';
            } else {
                io::write_sweep_csv(body, s);
            }
            if (v.concave)
                err << "verdict: concave (max second diff <= 1e-9; observed "
                    << io::format_double(v.max_second_difference) << ")\n";
            else
                err << "verdict: NOT concave (max second diff " << io::format_double(v.max_second_difference) << ")\n";
            if (s.local_max_row)
                err << "local-max row: " << *s.local_max_row << " (alpha_k = "
                    << io::format_double(s.alpha_grid[*s.local_max_row]) << ")\n";
            emit(body.str(), app, *sweep, g, out);
        } else if (*sim) {
            const SystemSpec system = build_system(sim_sys);
            const SimConfig config{sim_trials, g.seed, system};
            const SimOptions options{sim_workers, false};
            SimResult result;
            if (!sim_policy.empty()) {
                const DecisionPolicy policy = io::policy_from_json(read_json_file(sim_policy), system);
                result = simulate(config, policy, options);
            } else if (system.n() <= kDefaultTableLimit) {
                result = simulate(config, map_policy_for(system), options);
            } else {
                const auto canon = canonicalize(system);
                const SimConfig canon_config{sim_trials, g.seed, canon.system};
                result = simulate(canon_config, DecisionPolicy::map(canon.system), options);
            }
            if (format_or(g, "json") == "json") {
                body << io::sim_result_to_json(result).dump(2) << '\n';
            } else {
                body << "trials,errors,empirical_error,std_error,seed\n"
                     << result.trials << ',' << result.errors << ','
                     << io::format_double(result.empirical_error) << ','
                     << io::format_double(result.std_error) << ',' << result.seed << '\n';
            }
            emit(body.str(), app, *sim, g, out);
        } else if (*claim1) {
            if (claim1_m_max < 1 || claim1_m_max > kClaim1MaxM)
                throw UsageError("--m-max must lie in [1, 64]");
            bool all = true;
            const bool json = format_or(g, "csv") == "json";
            Json rows = Json::array();
            if (!json) body << "m,inequality,product_identity\n";
            for (std::size_t m = 1; m <= claim1_m_max; ++m) {
                const Claim1Result c = claim1_check(m);
                all = all && c.inequality && c.product_identity;
                if (json) rows.push_back({{"m", m}, {"inequality", c.inequality}, {"product_identity", c.product_identity}});
                else body << m << ',' << (c.inequality ? 1 : 0) << ',' << (c.product_identity ? 1 : 0) << '\n';
            }
            if (json) body << rows.dump(2) << '\n';
            emit(body.str(), app, *claim1, g, out);
            if (!all) return kExitFailure;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SizeGuardError& e) {
        err << "size guard: " << e.what() << '\n';
        return kExitSizeGuard;
    } catch (const std::invalid_argument& e) {
        err << "inconsistent input: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace biasfuse::cli
