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

#include "bellport/report.hpp"

#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

using bellport::BranchPolicy;
using bellport::complex_t;
using bellport::emit_report;
using bellport::ExperimentConfig;
using bellport::ExperimentReport;
using bellport::OutputFormat;
using bellport::RunMode;

namespace {

ExperimentConfig sample_config() {
    ExperimentConfig config;
    config.n = 3;
    config.x = "010";
    config.alpha = complex_t{0.6, 0.1};
    config.beta = complex_t{0.79372539331937719, 0.0};  // sqrt(1 - |alpha|^2)
    config.random_state = false;
    config.a = 0.8;
    config.b = 0.6;
    config.policy = BranchPolicy::NOnly;
    config.mode = RunMode::Both;
    config.trials = 12345;
    config.seed = 987654321;
    config.output_format = OutputFormat::Json;
    config.trace = false;
    return config;
}

ExperimentReport full_report() {
    ExperimentReport report;
    report.config = sample_config();
    report.exact = bellport::enumerate_exact(report.config.state_spec(),
                                             report.config.channel_spec());
    report.empirical =
        bellport::run_experiment(report.config.state_spec(), report.config.channel_spec(),
                                 report.config.policy, 2048, report.config.seed);
    report.verdict = bellport::compare(*report.exact, *report.empirical);
    return report;
}

// Rebuilds a config from the emitted JSON; the round-trip invariant is that
// this reproduces the original field for field.
ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    config.n = j.at("n").get<int>();
    config.x = j.at("x").get<std::string>();
    config.alpha = complex_t{j.at("alpha")[0].get<double>(), j.at("alpha")[1].get<double>()};
    config.beta = complex_t{j.at("beta")[0].get<double>(), j.at("beta")[1].get<double>()};
    config.random_state = j.at("random_state").get<bool>();
    config.a = j.at("a").get<double>();
    config.b = j.at("b").get<double>();
    config.policy = j.at("policy").get<std::string>() == "n-only" ? BranchPolicy::NOnly
                                                                  : BranchPolicy::AllBranches;
    const std::string mode = j.at("mode").get<std::string>();
    config.mode = mode == "exact" ? RunMode::Exact
                                  : (mode == "sample" ? RunMode::Sample : RunMode::Both);
    config.trials = j.at("trials").get<std::uint64_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.output_format = j.at("format").get<std::string>() == "json" ? OutputFormat::Json
                                                                        : OutputFormat::Csv;
    config.trace = j.at("trace").get<bool>();
    return config;
}

}  // namespace

TEST(json_report, is_valid_json_and_round_trips_the_config) {
    const ExperimentReport report = full_report();
    const nlohmann::json parsed = nlohmann::json::parse(emit_report(report));

    const ExperimentConfig back = config_from_json(parsed.at("config"));
    EXPECT_EQ(back.n, report.config.n);
    EXPECT_EQ(back.x, report.config.x);
    EXPECT_EQ(back.alpha, report.config.alpha);  // 17 digits round-trip exactly
    EXPECT_EQ(back.beta, report.config.beta);
    EXPECT_EQ(back.random_state, report.config.random_state);
    EXPECT_EQ(back.a, report.config.a);
    EXPECT_EQ(back.b, report.config.b);
    EXPECT_EQ(back.policy, report.config.policy);
    EXPECT_EQ(back.mode, report.config.mode);
    EXPECT_EQ(back.trials, report.config.trials);
    EXPECT_EQ(back.seed, report.config.seed);
    EXPECT_EQ(back.output_format, report.config.output_format);
    EXPECT_EQ(back.trace, report.config.trace);
}

TEST(json_report, summary_sections_round_trip_numerically) {
    const ExperimentReport report = full_report();
    const nlohmann::json parsed = nlohmann::json::parse(emit_report(report));

    const auto& exact = parsed.at("exact");
    EXPECT_EQ(exact.at("success_n_only").get<double>(), report.exact->success_n_only);
    EXPECT_EQ(exact.at("success_all").get<double>(), report.exact->success_all);
    ASSERT_EQ(exact.at("branches").size(), 4u);
    EXPECT_EQ(exact.at("branches")[0].at("outcome").get<std::string>(), "00");
    EXPECT_EQ(exact.at("branches")[1].at("class").get<std::string>(), "MForm");
    EXPECT_EQ(exact.at("branches")[2].at("probability").get<double>(),
              report.exact->branches[2].branch_probability);

    const auto& empirical = parsed.at("empirical");
    EXPECT_EQ(empirical.at("trials").get<std::uint64_t>(), report.empirical->trials);
    EXPECT_EQ(empirical.at("successes").get<std::uint64_t>(), report.empirical->successes);
    EXPECT_EQ(empirical.at("success_rate").get<double>(), report.empirical->success_rate());

    const auto& verdict = parsed.at("verdict");
    EXPECT_EQ(verdict.at("pass").get<bool>(), report.verdict->pass);
    EXPECT_EQ(verdict.at("z").get<double>(), report.verdict->z);
}

TEST(json_report, exact_only_run_omits_the_other_sections) {
    ExperimentReport report;
    report.config = sample_config();
    report.config.mode = RunMode::Exact;
    report.exact = bellport::enumerate_exact(report.config.state_spec(),
                                             report.config.channel_spec());
    const nlohmann::json parsed = nlohmann::json::parse(emit_report(report));
    EXPECT_TRUE(parsed.contains("exact"));
    EXPECT_FALSE(parsed.contains("empirical"));
    EXPECT_FALSE(parsed.contains("verdict"));
    EXPECT_FALSE(parsed.contains("trace"));
}

TEST(json_report, identical_inputs_emit_identical_bytes) {
    const std::string first = emit_report(full_report());
    const std::string second = emit_report(full_report());
    EXPECT_EQ(first, second);
}

TEST(json_report, numbers_carry_17_significant_digits) {
    ExperimentReport report;
    report.config = sample_config();
    report.config.a = 0.1;                      // classic non-representable decimal
    report.config.b = 0.99498743710661997;      // keeps the config well formed
    const std::string text = emit_report(report);
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    const nlohmann::json parsed = nlohmann::json::parse(text);
    EXPECT_EQ(parsed.at("config").at("a").get<double>(), 0.1);
}

TEST(json_report, non_finite_values_become_null) {
    ExperimentReport report;
    report.config = sample_config();
    bellport::Verdict verdict;
    verdict.pass = false;
    verdict.z = std::numeric_limits<double>::infinity();
    report.verdict = verdict;
    const nlohmann::json parsed = nlohmann::json::parse(emit_report(report));
    EXPECT_TRUE(parsed.at("verdict").at("z").is_null());
}

TEST(json_report, trace_terms_use_msb_first_kets) {
    ExperimentReport report;
    report.config = sample_config();
    report.trace.push_back(
        bellport::TraceEntry{"psi1_joint", bellport::PureState::basis_state(3, 4)});
    const nlohmann::json parsed = nlohmann::json::parse(emit_report(report));
    const auto& entry = parsed.at("trace")[0];
    EXPECT_EQ(entry.at("label").get<std::string>(), "psi1_joint");
    EXPECT_EQ(entry.at("num_qubits").get<int>(), 3);
    ASSERT_EQ(entry.at("terms").size(), 1u);
    EXPECT_EQ(entry.at("terms")[0].at("ket").get<std::string>(), "100");
    EXPECT_EQ(entry.at("terms")[0].at("re").get<double>(), 1.0);
}

TEST(csv_report, one_row_per_branch_plus_summary) {
    ExperimentReport report = full_report();
    report.config.output_format = OutputFormat::Csv;
    const std::string text = emit_report(report);

    std::vector<std::string> lines;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 6u);  // header, 4 branches, summary
    EXPECT_EQ(lines[0],
              "record,outcome,branch_class,branch_probability,conditional_filter_success,"
              "joint_success,post_success_fidelity,success_n_only,success_all,trials,"
              "successes,success_rate,mean_fidelity_on_success,seed,verdict_pass,verdict_z");
    for (const std::string& row : lines) {
        EXPECT_EQ(std::count(row.begin(), row.end(), ','), 15) << row;
    }
    EXPECT_EQ(lines[1].rfind("branch,00,NForm,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("branch,01,MForm,", 0), 0u);
    EXPECT_EQ(lines[5].rfind("summary,", 0), 0u);
    EXPECT_NE(lines[5].find(",0.36000000000000004,0.7200000000000002,"), std::string::npos);
}

TEST(csv_report, sample_only_leaves_branch_columns_empty) {
    ExperimentReport report;
    report.config = sample_config();
    report.config.mode = RunMode::Sample;
    report.config.output_format = OutputFormat::Csv;
    report.empirical =
        bellport::run_experiment(report.config.state_spec(), report.config.channel_spec(),
                                 report.config.policy, 1024, 3);
    const std::string text = emit_report(report);
    std::vector<std::string> lines;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[1].rfind("summary,,,,,,,,,1024,", 0), 0u);
}
