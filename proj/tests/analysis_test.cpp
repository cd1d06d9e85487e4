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

#include "bellport/analysis.hpp"

#include "gtest/gtest.h"
#include "oracles.hpp"

using bellport::BranchClass;
using bellport::BranchPolicy;
using bellport::ChannelSpec;
using bellport::compare;
using bellport::complex_t;
using bellport::EmpiricalSummary;
using bellport::enumerate_exact;
using bellport::ExactSummary;
using bellport::RandomStream;
using bellport::run_experiment;
using bellport::UnknownStateSpec;
using bellport::Verdict;

namespace {

const ChannelSpec kChannel{0.8, 0.6};

UnknownStateSpec worked_spec() { return UnknownStateSpec(3, {0, 0, 0}, 0.6, 0.8); }

}  // namespace

TEST(enumerate_exact, worked_example_branch_table) {
    const ExactSummary summary = enumerate_exact(worked_spec(), kChannel);

    double branch_total = 0.0;
    for (int outcome = 0; outcome < 4; ++outcome) {
        const auto& report = summary.branches[outcome];
        EXPECT_EQ(report.data_bit, outcome >> 1);
        EXPECT_EQ(report.bell_bit, outcome & 1);
        const bool n_form = (outcome & 1) == 0;
        EXPECT_EQ(report.branch_class, n_form ? BranchClass::NForm : BranchClass::MForm);
        EXPECT_NEAR(report.branch_probability, n_form ? 0.2304 : 0.2696, 1e-12);
        EXPECT_NEAR(report.conditional_filter_success,
                    n_form ? 0.78125 : 0.66765578635014833, 1e-12);
        EXPECT_NEAR(report.joint_success,
                    report.branch_probability * report.conditional_filter_success, 1e-12);
        EXPECT_NEAR(report.joint_success, 0.18, 1e-12);
        EXPECT_NEAR(report.post_success_fidelity, 1.0, 1e-10);
        branch_total += report.branch_probability;
    }
    EXPECT_NEAR(branch_total, 1.0, 1e-12);
    EXPECT_NEAR(summary.success_n_only, 0.36, 1e-12);
    EXPECT_NEAR(summary.success_all, 0.72, 1e-12);
}

TEST(enumerate_exact, maximally_entangled_channel_always_succeeds) {
    const double h = 0.70710678118654746;
    const ExactSummary summary = enumerate_exact(worked_spec(), ChannelSpec(h, h));
    EXPECT_NEAR(summary.success_all, 1.0, 1e-12);
    EXPECT_NEAR(summary.success_n_only, 0.5, 1e-12);
    for (const auto& report : summary.branches) {
        EXPECT_NEAR(report.conditional_filter_success, 1.0, 1e-12);
    }
}

// The protocol's success rate collapses to a function of b alone; the closed
// forms b^2 and 2 b^2 come straight from the branch algebra and serve as the
// independent oracle here.
TEST(enumerate_exact, success_depends_only_on_b) {
    RandomStream rng(71);
    const double channel_points[3] = {0.1, 0.36, 0.5};
    for (const double b2 : channel_points) {
        const ChannelSpec channel(std::sqrt(1.0 - b2), std::sqrt(b2));
        for (int n : {1, 2, 4, 6}) {
            const auto [alpha, beta] = bellport::random_amplitude_pair(rng);
            std::vector<int> x(n);
            for (int& bit : x) bit = static_cast<int>(rng.next_u64() & 1);
            const ExactSummary summary =
                enumerate_exact(UnknownStateSpec(n, x, alpha, beta), channel);
            const double b_sq = channel.b * channel.b;
            EXPECT_NEAR(summary.success_n_only, b_sq, 1e-12) << "b2=" << b2 << " n=" << n;
            EXPECT_NEAR(summary.success_all, 2.0 * b_sq, 1e-12) << "b2=" << b2 << " n=" << n;
            EXPECT_LE(summary.success_n_only, summary.success_all);
        }
    }
}

TEST(run_experiment, reproducible_for_fixed_seed) {
    const auto first = run_experiment(worked_spec(), kChannel, BranchPolicy::AllBranches,
                                      20000, 91);
    const auto second = run_experiment(worked_spec(), kChannel, BranchPolicy::AllBranches,
                                       20000, 91);
    EXPECT_EQ(first.successes, second.successes);
    EXPECT_EQ(first.mean_fidelity_on_success, second.mean_fidelity_on_success);
    EXPECT_EQ(first.trials, 20000u);
    EXPECT_EQ(first.seed, 91u);
    EXPECT_EQ(first.policy, BranchPolicy::AllBranches);
}

TEST(run_experiment, thread_count_does_not_change_the_result) {
    const auto serial =
        run_experiment(worked_spec(), kChannel, BranchPolicy::NOnly, 10240, 17, 1);
    for (unsigned workers : {2u, 3u, 8u}) {
        const auto parallel =
            run_experiment(worked_spec(), kChannel, BranchPolicy::NOnly, 10240, 17, workers);
        EXPECT_EQ(parallel.successes, serial.successes) << "workers=" << workers;
        EXPECT_EQ(parallel.mean_fidelity_on_success, serial.mean_fidelity_on_success)
            << "workers=" << workers;
    }
}

TEST(run_experiment, single_trial_on_perfect_channel_succeeds) {
    const double h = 0.70710678118654746;
    const auto summary = run_experiment(worked_spec(), ChannelSpec(h, h),
                                        BranchPolicy::AllBranches, 1, 5);
    EXPECT_EQ(summary.successes, 1u);
    EXPECT_NEAR(summary.mean_fidelity_on_success, 1.0, 1e-10);
}

TEST(run_experiment, agrees_with_exact_at_four_sigma) {
    const ExactSummary exact = enumerate_exact(worked_spec(), kChannel);
    for (BranchPolicy policy : {BranchPolicy::NOnly, BranchPolicy::AllBranches}) {
        const auto empirical = run_experiment(worked_spec(), kChannel, policy, 100000, 2718);
        const Verdict verdict = compare(exact, empirical);
        EXPECT_TRUE(verdict.pass) << "policy=" << bellport::branch_policy_name(policy)
                                  << " z=" << verdict.z;
        EXPECT_LE(std::abs(verdict.z), 4.0);
        EXPECT_NEAR(empirical.mean_fidelity_on_success, 1.0, 1e-10);
    }
}

TEST(run_experiment, zero_successes_reports_zero_mean_fidelity) {
    // b = 1e-3: success probability 2e-6, so 64 trials at a fixed seed see none.
    const ChannelSpec feeble(std::sqrt(1.0 - 1e-6), 1e-3);
    const auto summary = run_experiment(worked_spec(), feeble, BranchPolicy::AllBranches,
                                        64, 9);
    EXPECT_EQ(summary.successes, 0u);
    EXPECT_EQ(summary.mean_fidelity_on_success, 0.0);
}

TEST(run_experiment, rejects_zero_trials) {
    EXPECT_THROW(run_experiment(worked_spec(), kChannel, BranchPolicy::NOnly, 0, 1),
                 std::invalid_argument);
}

TEST(compare, exact_agreement_passes_with_zero_z) {
    ExactSummary exact;
    exact.success_all = 0.5;
    EmpiricalSummary empirical;
    empirical.trials = 1000;
    empirical.successes = 500;
    empirical.policy = BranchPolicy::AllBranches;
    const Verdict verdict = compare(exact, empirical);
    EXPECT_TRUE(verdict.pass);
    EXPECT_EQ(verdict.z, 0.0);
    EXPECT_EQ(verdict.absolute_deviation, 0.0);
}

TEST(compare, five_sigma_deviation_fails) {
    ExactSummary exact;
    exact.success_all = 0.5;
    EmpiricalSummary empirical;
    empirical.trials = 10000;
    empirical.policy = BranchPolicy::AllBranches;
    const double sigma = std::sqrt(0.25 / 10000.0);
    empirical.successes = static_cast<std::uint64_t>((0.5 + 5.0 * sigma) * 10000.0);
    const Verdict verdict = compare(exact, empirical);
    EXPECT_FALSE(verdict.pass);
    EXPECT_GT(verdict.z, 4.0);
    EXPECT_NEAR(verdict.threshold, 4.0 * sigma, 1e-15);
}

TEST(compare, picks_the_probability_matching_the_policy) {
    ExactSummary exact;
    exact.success_n_only = 0.36;
    exact.success_all = 0.72;
    EmpiricalSummary empirical;
    empirical.trials = 100;
    empirical.successes = 36;
    empirical.policy = BranchPolicy::NOnly;
    EXPECT_EQ(compare(exact, empirical).exact_probability, 0.36);
    empirical.policy = BranchPolicy::AllBranches;
    EXPECT_EQ(compare(exact, empirical).exact_probability, 0.72);
}

TEST(compare, degenerate_probability_requires_exact_match) {
    ExactSummary exact;
    exact.success_all = 1.0;
    EmpiricalSummary empirical;
    empirical.trials = 100;
    empirical.successes = 100;
    empirical.policy = BranchPolicy::AllBranches;
    EXPECT_TRUE(compare(exact, empirical).pass);
    empirical.successes = 99;
    const Verdict verdict = compare(exact, empirical);
    EXPECT_FALSE(verdict.pass);
    EXPECT_TRUE(std::isinf(verdict.z));
}

// Binomial tail: at the 4 sigma gate a single run fails with probability
// about 6e-5, so 100 independent runs pass at least 99 times.
TEST(compare, hundred_seeded_runs_stay_inside_the_gate) {
    const UnknownStateSpec spec(1, {0}, 0.6, 0.8);
    const ExactSummary exact = enumerate_exact(spec, kChannel);
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto empirical =
            run_experiment(spec, kChannel, BranchPolicy::AllBranches, 10000, seed);
        if (compare(exact, empirical).pass) ++passes;
    }
    EXPECT_GE(passes, 99);
}
