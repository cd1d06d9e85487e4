// Copyright 2026 The bellport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <string_view>

#include "CLI11.hpp"

#include "bellport/report.hpp"

namespace bellport {

/// Invalid command line; the driver reports the message and exits with 2.
class CliError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse_args for --help so the driver can print and exit 0.
struct CliHelp {
    std::string text;
};

/// Amplitude-pair inputs within this distance of unit norm are renormalized;
/// anything further off is treated as a typo and rejected.
inline constexpr double kCliNormWindow = 1e-6;

/// Substream index reserved for drawing a random input state, far away from
/// the trial-chunk indices used by run_experiment.
inline constexpr std::uint64_t kStateDrawStream = 0xFFFFFFFFFFFFFFFFull;

namespace detail {

inline double parse_double_strict(std::string_view text, const char* what) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw CliError(std::string("could not parse ") + what + " from '" +
                       std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

/// Accepts "re" or "re,im".
inline complex_t parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        return complex_t{detail::parse_double_strict(text, "amplitude"), 0.0};
    }
    return complex_t{
        detail::parse_double_strict(std::string_view(text).substr(0, comma), "amplitude"),
        detail::parse_double_strict(std::string_view(text).substr(comma + 1), "amplitude")};
}

inline std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw CliError("could not parse seed from '" + text + "'");
    }
    return value;
}

/**
 * Parses and validates the experiment flags. Throws CliHelp when help was
 * requested and CliError on any invalid input. The seed falls back to the
 * BELLPORT_SEED environment variable, then to 1.
 */
inline ExperimentConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"conclusive teleportation of alpha|x> + beta|x_bar> through a|00> + b|11>"};
    app.get_formatter()->column_width(28);

    int n = 0;
    std::string x;
    std::string alpha_text;
    std::string beta_text;
    bool random_state = false;
    double a = 0.0;
    double b = 0.0;
    std::string policy_text = "all";
    std::string mode_text = "both";
    std::uint64_t trials = 100000;
    std::string seed_text;
    std::string format_text = "json";
    bool trace = false;

    app.add_option("--n", n, "number of qubits in the state to send")->required();
    app.add_option("--x", x, "bit string labeling the state, length n")->required();
    app.add_option("--alpha", alpha_text, "amplitude of |x>, as re or re,im");
    app.add_option("--beta", beta_text, "amplitude of |x_bar>, as re or re,im");
    app.add_flag("--random-state", random_state,
                 "draw alpha, beta at random (seeded) instead of --alpha/--beta");
    app.add_option("--a", a, "channel coefficient of |00>")->required();
    app.add_option("--b", b, "channel coefficient of |11>")->required();
    app.add_option("--policy", policy_text, "branches to filter: n-only or all (default all)");
    app.add_option("--mode", mode_text, "exact, sample, or both (default both)");
    app.add_option("--trials", trials, "sampled trials (default 100000)");
    app.add_option("--seed", seed_text, "64-bit RNG seed (default $BELLPORT_SEED, then 1)");
    app.add_option("--format", format_text, "report format: json or csv (default json)");
    app.add_flag("--trace", trace, "include per-step state snapshots in the JSON report");

    std::vector<std::string> storage = args;
    std::vector<const char*> argv;
    argv.push_back("bellport");
    for (const std::string& arg : storage) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw CliHelp{app.help()};
    } catch (const CLI::ParseError& e) {
        throw CliError(e.what());
    }

    ExperimentConfig config;

    if (n < 1) throw CliError("--n must be at least 1");
    if (n > kMaxQubits - 3) {
        throw CliError("--n must be at most " + std::to_string(kMaxQubits - 3) +
                       " to fit the simulable register");
    }
    config.n = n;

    std::vector<int> x_bits;
    try {
        x_bits = bits_from_string(x);
    } catch (const std::invalid_argument& e) {
        throw CliError(std::string("--x: ") + e.what());
    }
    if (static_cast<int>(x_bits.size()) != n) {
        throw CliError("--x must have exactly n = " + std::to_string(n) + " bits");
    }
    config.x = x;

    if (!seed_text.empty()) {
        config.seed = parse_seed(seed_text);
    } else if (const char* env = std::getenv("BELLPORT_SEED")) {
        config.seed = parse_seed(env);
    } else {
        config.seed = 1;
    }

    const bool explicit_amplitudes = !alpha_text.empty() || !beta_text.empty();
    if (random_state == explicit_amplitudes) {
        throw CliError("provide either --alpha and --beta or --random-state, not both");
    }
    if (random_state) {
        RandomStream draw = RandomStream(config.seed).substream(kStateDrawStream);
        const auto [alpha, beta] = random_amplitude_pair(draw);
        config.alpha = alpha;
        config.beta = beta;
        config.random_state = true;
    } else {
        if (alpha_text.empty() || beta_text.empty()) {
            throw CliError("--alpha and --beta must be given together");
        }
        config.alpha = parse_complex(alpha_text);
        config.beta = parse_complex(beta_text);
        const double norm = std::norm(config.alpha) + std::norm(config.beta);
        if (std::abs(norm - 1.0) > kCliNormWindow) {
            throw CliError("|alpha|^2 + |beta|^2 = " + detail::format_double(norm) +
                           " is too far from 1; normalize the amplitudes");
        }
        const double scale = std::sqrt(norm);
        config.alpha /= scale;
        config.beta /= scale;
    }

    if (!(a > 0.0) || !(b > 0.0)) {
        throw CliError("--a and --b must be positive reals");
    }
    const double channel_norm = a * a + b * b;
    if (std::abs(channel_norm - 1.0) > kCliNormWindow) {
        throw CliError("a^2 + b^2 = " + detail::format_double(channel_norm) +
                       " is too far from 1; normalize the channel");
    }
    const double channel_scale = std::sqrt(channel_norm);
    config.a = a / channel_scale;
    config.b = b / channel_scale;
    if (config.b > config.a) throw CliError(kChannelOrderingHint);

    if (policy_text == "n-only") {
        config.policy = BranchPolicy::NOnly;
    } else if (policy_text == "all") {
        config.policy = BranchPolicy::AllBranches;
    } else {
        throw CliError("--policy must be 'n-only' or 'all'");
    }

    if (mode_text == "exact") {
        config.mode = RunMode::Exact;
    } else if (mode_text == "sample") {
        config.mode = RunMode::Sample;
    } else if (mode_text == "both") {
        config.mode = RunMode::Both;
    } else {
        throw CliError("--mode must be 'exact', 'sample', or 'both'");
    }

    if (trials < 1) throw CliError("--trials must be at least 1");
    config.trials = trials;

    if (format_text == "json") {
        config.output_format = OutputFormat::Json;
    } else if (format_text == "csv") {
        config.output_format = OutputFormat::Csv;
    } else {
        throw CliError("--format must be 'json' or 'csv'");
    }

    if (trace && config.output_format != OutputFormat::Json) {
        throw CliError("--trace is only available with --format json");
    }
    config.trace = trace;

    return config;
}

/**
 * Full driver: parse, run the requested modes, emit the report on out and
 * notes on err. Returns the process exit code: 0 on success, 1 when the
 * statistical verdict fails, 2 on bad input.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    try {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
        config = parse_args(args);
    } catch (const CliHelp& help) {
        out << help.text;
        return 0;
    } catch (const CliError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (std::abs(config.alpha) >= std::abs(config.beta)) {
        err << "note: |alpha| >= |beta|; the protocol runs unchanged, the ordering plays no "
               "role\n";
    }

    ExperimentReport report;
    report.config = config;
    const UnknownStateSpec spec = config.state_spec();
    const ChannelSpec channel = config.channel_spec();

    if (config.mode != RunMode::Sample) {
        report.exact = enumerate_exact(spec, channel);
    }
    if (config.mode != RunMode::Exact) {
        report.empirical =
            run_experiment(spec, channel, config.policy, config.trials, config.seed);
    }
    if (config.mode == RunMode::Both) {
        report.verdict = compare(*report.exact, *report.empirical);
    }
    if (config.trace) {
        RandomStream replay = RandomStream(config.seed).substream(0);
        TrialOutcome traced = run_trial(spec, channel, config.policy, replay, true);
        report.trace = std::move(traced.trace);
    }

    out << emit_report(report);
    if (report.verdict && !report.verdict->pass) return 1;
    return 0;
}

}  // namespace bellport
