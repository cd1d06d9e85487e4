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

#include <cstdio>
#include <string>

#include "bellport/analysis.hpp"

namespace bellport {

enum class RunMode { Exact, Sample, Both };
enum class OutputFormat { Json, Csv };

inline const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Exact: return "exact";
        case RunMode::Sample: return "sample";
        case RunMode::Both: return "both";
    }
    return "?";
}

inline const char* output_format_name(OutputFormat format) {
    return format == OutputFormat::Json ? "json" : "csv";
}

/// Everything a run needs, as parsed from the command line.
struct ExperimentConfig {
    int n = 1;
    std::string x = "0";
    complex_t alpha{1.0, 0.0};
    complex_t beta{0.0, 0.0};
    bool random_state = false;
    double a = 1.0 / 1.4142135623730951;
    double b = 1.0 / 1.4142135623730951;
    BranchPolicy policy = BranchPolicy::AllBranches;
    RunMode mode = RunMode::Both;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    OutputFormat output_format = OutputFormat::Json;
    bool trace = false;

    UnknownStateSpec state_spec() const {
        return UnknownStateSpec(n, bits_from_string(x), alpha, beta);
    }
    ChannelSpec channel_spec() const { return ChannelSpec(a, b); }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::optional<ExactSummary> exact;
    std::optional<EmpiricalSummary> empirical;
    std::optional<Verdict> verdict;
    std::vector<TraceEntry> trace;
};

namespace detail {

/// 17 significant digits: enough for a double to round-trip exactly.
inline std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

inline std::string json_number(double value) {
    if (!std::isfinite(value)) return "null";
    return format_double(value);
}

inline std::string json_string(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof buffer, "\\u%04x", c);
                    out += buffer;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

inline std::string ket_string(const PureState& state, std::uint64_t index) {
    std::string ket(state.num_qubits(), '0');
    for (int q = 0; q < state.num_qubits(); ++q) {
        if (index & qubit_mask(state.num_qubits(), q)) ket[q] = '1';
    }
    return ket;
}

inline void append_config_json(std::string& out, const ExperimentConfig& config) {
    out += "  \"config\": {\n";
    out += "    \"n\": " + std::to_string(config.n) + ",\n";
    out += "    \"x\": " + json_string(config.x) + ",\n";
    out += "    \"alpha\": [" + json_number(config.alpha.real()) + ", " +
           json_number(config.alpha.imag()) + "],\n";
    out += "    \"beta\": [" + json_number(config.beta.real()) + ", " +
           json_number(config.beta.imag()) + "],\n";
    out += std::string("    \"random_state\": ") + (config.random_state ? "true" : "false") +
           ",\n";
    out += "    \"a\": " + json_number(config.a) + ",\n";
    out += "    \"b\": " + json_number(config.b) + ",\n";
    out += "    \"policy\": " + json_string(branch_policy_name(config.policy)) + ",\n";
    out += "    \"mode\": " + json_string(run_mode_name(config.mode)) + ",\n";
    out += "    \"trials\": " + std::to_string(config.trials) + ",\n";
    out += "    \"seed\": " + std::to_string(config.seed) + ",\n";
    out += "    \"format\": " + json_string(output_format_name(config.output_format)) + ",\n";
    out += std::string("    \"trace\": ") + (config.trace ? "true" : "false") + "\n";
    out += "  }";
}

inline void append_exact_json(std::string& out, const ExactSummary& exact) {
    out += "  \"exact\": {\n    \"branches\": [\n";
    for (std::size_t i = 0; i < exact.branches.size(); ++i) {
        const BranchReport& report = exact.branches[i];
        const std::string outcome = std::to_string(report.data_bit) +
                                    std::to_string(report.bell_bit);
        out += "      {\"outcome\": " + json_string(outcome) + ", \"class\": " +
               json_string(branch_class_name(report.branch_class)) +
               ", \"probability\": " + json_number(report.branch_probability) +
               ", \"conditional_filter_success\": " +
               json_number(report.conditional_filter_success) +
               ", \"joint_success\": " + json_number(report.joint_success) +
               ", \"post_success_fidelity\": " + json_number(report.post_success_fidelity) +
               "}";
        out += i + 1 < exact.branches.size() ? ",\n" : "\n";
    }
    out += "    ],\n";
    out += "    \"success_n_only\": " + json_number(exact.success_n_only) + ",\n";
    out += "    \"success_all\": " + json_number(exact.success_all) + "\n";
    out += "  }";
}

inline void append_empirical_json(std::string& out, const EmpiricalSummary& empirical) {
    out += "  \"empirical\": {\n";
    out += "    \"trials\": " + std::to_string(empirical.trials) + ",\n";
    out += "    \"successes\": " + std::to_string(empirical.successes) + ",\n";
    out += "    \"success_rate\": " + json_number(empirical.success_rate()) + ",\n";
    out += "    \"mean_fidelity_on_success\": " +
           json_number(empirical.mean_fidelity_on_success) + ",\n";
    out += "    \"seed\": " + std::to_string(empirical.seed) + "\n";
    out += "  }";
}

inline void append_verdict_json(std::string& out, const Verdict& verdict) {
    out += "  \"verdict\": {\n";
    out += std::string("    \"pass\": ") + (verdict.pass ? "true" : "false") + ",\n";
    out += "    \"z\": " + json_number(verdict.z) + ",\n";
    out += "    \"exact_probability\": " + json_number(verdict.exact_probability) + ",\n";
    out += "    \"empirical_rate\": " + json_number(verdict.empirical_rate) + ",\n";
    out += "    \"absolute_deviation\": " + json_number(verdict.absolute_deviation) + ",\n";
    out += "    \"threshold\": " + json_number(verdict.threshold) + "\n";
    out += "  }";
}

inline void append_trace_json(std::string& out, const std::vector<TraceEntry>& trace) {
    out += "  \"trace\": [\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceEntry& entry = trace[i];
        out += "    {\"label\": " + json_string(entry.label) + ", \"num_qubits\": " +
               std::to_string(entry.state.num_qubits()) + ", \"terms\": [";
        bool first = true;
        for (std::uint64_t k = 0; k < entry.state.dim(); ++k) {
            const complex_t amp = entry.state[k];
            if (std::abs(amp) <= 1e-15) continue;
            if (!first) out += ", ";
            first = false;
            out += "{\"ket\": " + json_string(ket_string(entry.state, k)) + ", \"re\": " +
                   json_number(amp.real()) + ", \"im\": " + json_number(amp.imag()) + "}";
        }
        out += "]}";
        out += i + 1 < trace.size() ? ",\n" : "\n";
    }
    out += "  ]";
}

inline std::string emit_json_report(const ExperimentReport& report) {
    std::string out = "{\n";
    append_config_json(out, report.config);
    if (report.exact) {
        out += ",\n";
        append_exact_json(out, *report.exact);
    }
    if (report.empirical) {
        out += ",\n";
        append_empirical_json(out, *report.empirical);
    }
    if (report.verdict) {
        out += ",\n";
        append_verdict_json(out, *report.verdict);
    }
    if (!report.trace.empty()) {
        out += ",\n";
        append_trace_json(out, report.trace);
    }
    out += "\n}\n";
    return out;
}

inline std::string emit_csv_report(const ExperimentReport& report) {
    std::string out =
        "record,outcome,branch_class,branch_probability,conditional_filter_success,"
        "joint_success,post_success_fidelity,success_n_only,success_all,trials,successes,"
        "success_rate,mean_fidelity_on_success,seed,verdict_pass,verdict_z\n";
    if (report.exact) {
        for (const BranchReport& branch : report.exact->branches) {
            out += "branch," + std::to_string(branch.data_bit) +
                   std::to_string(branch.bell_bit) + "," +
                   branch_class_name(branch.branch_class) + "," +
                   format_double(branch.branch_probability) + "," +
                   format_double(branch.conditional_filter_success) + "," +
                   format_double(branch.joint_success) + "," +
                   format_double(branch.post_success_fidelity) + ",,,,,,,,,\n";
        }
    }
    out += "summary,,,,,,,";
    out += report.exact ? format_double(report.exact->success_n_only) : "";
    out += ",";
    out += report.exact ? format_double(report.exact->success_all) : "";
    out += ",";
    if (report.empirical) {
        out += std::to_string(report.empirical->trials) + "," +
               std::to_string(report.empirical->successes) + "," +
               format_double(report.empirical->success_rate()) + "," +
               format_double(report.empirical->mean_fidelity_on_success) + "," +
               std::to_string(report.empirical->seed) + ",";
    } else {
        out += ",,,,,";
    }
    if (report.verdict) {
        out += std::string(report.verdict->pass ? "true" : "false") + "," +
               format_double(report.verdict->z);
    } else {
        out += ",";
    }
    out += "\n";
    return out;
}

}  // namespace detail

/// Serializes a report in the config's output format. Key order, indentation
/// and 17-digit number formatting are fixed, so equal reports serialize to
/// byte-identical text.
inline std::string emit_report(const ExperimentReport& report) {
    return report.config.output_format == OutputFormat::Json
               ? detail::emit_json_report(report)
               : detail::emit_csv_report(report);
}

}  // namespace bellport
