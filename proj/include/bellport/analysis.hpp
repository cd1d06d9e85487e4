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

#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "bellport/protocol.hpp"

namespace bellport {

/// Closed-form bookkeeping for one of Alice's four measurement outcomes.
struct BranchReport {
    int data_bit = 0;
    int bell_bit = 0;
    BranchClass branch_class = BranchClass::NForm;
    double branch_probability = 0.0;
    double conditional_filter_success = 0.0;
    double joint_success = 0.0;
    double post_success_fidelity = 0.0;
};

struct ExactSummary {
    std::array<BranchReport, 4> branches;
    double success_n_only = 0.0;
    double success_all = 0.0;
};

/**
 * Walks every branch of the protocol by projection instead of sampling, so
 * the summary is policy-free: success_n_only keeps the two N-form branches,
 * success_all keeps all four.
 */
inline ExactSummary enumerate_exact(const UnknownStateSpec& spec, const ChannelSpec& channel) {
    const UnknownStateSpec canonical = canonicalize(spec);
    const PureState ideal = prepare_unknown_state(canonical);

    PureState state = prepare_joint_state(canonical, channel);
    state = alice_cnot_cascade(state, canonical.n);
    state = alice_hadamard(state);

    std::vector<int> eprime = expected_eprime(canonical);
    if (!eprime.empty()) {
        std::vector<int> targets;
        for (int q = 1; q < canonical.n; ++q) targets.push_back(q);
        state = project(state, targets, eprime).state;
    }

    const auto pair_probs = branch_probabilities(state, {0, canonical.n});

    ExactSummary summary;
    for (int outcome = 0; outcome < 4; ++outcome) {
        const int data_bit = outcome >> 1;
        const int bell_bit = outcome & 1;
        BranchReport& report = summary.branches[outcome];
        report.data_bit = data_bit;
        report.bell_bit = bell_bit;
        report.branch_class = classify_branch(bell_bit);
        report.branch_probability = pair_probs.at(outcome);

        PureState branch = project(state, {0, canonical.n}, {data_bit, bell_bit}).state;
        const int bob = branch.num_qubits() - 1;
        branch = apply_gate(branch, standard_gate(bob_select_correction(data_bit, bell_bit)),
                            {bob});

        PureState filtered = tensor(branch, PureState(1));
        filtered = apply_gate(filtered,
                              build_filter(filter_for_branch(channel, report.branch_class)),
                              {bob, bob + 1});
        report.conditional_filter_success = branch_probabilities(filtered, {bob + 1}).at(0);
        report.joint_success = report.branch_probability * report.conditional_filter_success;

        PureState heralded = project(filtered, {bob + 1}, {0}).state;
        ClassicalMessage message{eprime, data_bit, bell_bit};
        report.post_success_fidelity = fidelity(bob_reconstruct(heralded, message), ideal);

        summary.success_all += report.joint_success;
        if (report.branch_class == BranchClass::NForm) {
            summary.success_n_only += report.joint_success;
        }
    }
    return summary;
}

struct EmpiricalSummary {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean_fidelity_on_success = 0.0;
    std::uint64_t seed = 0;
    BranchPolicy policy = BranchPolicy::AllBranches;

    double success_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

namespace detail {

struct ChunkPartial {
    std::uint64_t successes = 0;
    double fidelity_sum = 0.0;
};

inline constexpr std::uint64_t kTrialsPerChunk = 1024;

inline ChunkPartial run_chunk(const UnknownStateSpec& spec, const ChannelSpec& channel,
                              BranchPolicy policy, RandomStream stream, std::uint64_t count) {
    ChunkPartial partial;
    for (std::uint64_t t = 0; t < count; ++t) {
        TrialOutcome outcome = run_trial(spec, channel, policy, stream);
        if (outcome.success) {
            ++partial.successes;
            partial.fidelity_sum += outcome.recovered_fidelity.value_or(0.0);
        }
    }
    return partial;
}

}  // namespace detail

/**
 * Monte Carlo driver. Trials are cut into fixed 1024-trial chunks, chunk c
 * draws from substream(c) of the seed, and partials merge in chunk order, so
 * the summary is byte-identical for any thread count. num_threads = 0 picks
 * the hardware concurrency.
 */
inline EmpiricalSummary run_experiment(const UnknownStateSpec& spec, const ChannelSpec& channel,
                                       BranchPolicy policy, std::uint64_t trials,
                                       std::uint64_t seed, unsigned num_threads = 0) {
    if (trials == 0) throw std::invalid_argument("run_experiment needs at least one trial");
    const UnknownStateSpec canonical = canonicalize(spec);
    const RandomStream root(seed);
    const std::uint64_t num_chunks =
        (trials + detail::kTrialsPerChunk - 1) / detail::kTrialsPerChunk;
    std::vector<detail::ChunkPartial> partials(num_chunks);

    auto chunk_size = [&](std::uint64_t c) {
        const std::uint64_t begin = c * detail::kTrialsPerChunk;
        return std::min(trials - begin, detail::kTrialsPerChunk);
    };

    unsigned workers = num_threads != 0 ? num_threads
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, num_chunks));

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < num_chunks; ++c) {
            partials[c] =
                detail::run_chunk(canonical, channel, policy, root.substream(c), chunk_size(c));
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        auto work = [&]() {
            for (std::uint64_t c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1)) {
                partials[c] = detail::run_chunk(canonical, channel, policy, root.substream(c),
                                                chunk_size(c));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    EmpiricalSummary summary;
    summary.trials = trials;
    summary.seed = seed;
    summary.policy = policy;
    double fidelity_sum = 0.0;
    for (const auto& partial : partials) {
        summary.successes += partial.successes;
        fidelity_sum += partial.fidelity_sum;
    }
    summary.mean_fidelity_on_success =
        summary.successes == 0 ? 0.0 : fidelity_sum / static_cast<double>(summary.successes);
    return summary;
}

/// Binomial agreement check between the closed-form rate and a sampled run.
struct Verdict {
    bool pass = false;
    double z = 0.0;
    double exact_probability = 0.0;
    double empirical_rate = 0.0;
    double absolute_deviation = 0.0;
    double threshold = 0.0;
};

/// Four-sigma gate on the policy-matched success rate. A zero-variance rate
/// (p = 0 or 1) passes only on exact agreement.
inline Verdict compare(const ExactSummary& exact, const EmpiricalSummary& empirical) {
    Verdict verdict;
    verdict.exact_probability = empirical.policy == BranchPolicy::NOnly ? exact.success_n_only
                                                                        : exact.success_all;
    verdict.empirical_rate = empirical.success_rate();
    verdict.absolute_deviation = std::abs(verdict.empirical_rate - verdict.exact_probability);

    const double p = verdict.exact_probability;
    const double sigma =
        std::sqrt(p * (1.0 - p) / static_cast<double>(empirical.trials));
    verdict.threshold = 4.0 * sigma;
    if (sigma == 0.0) {
        verdict.pass = verdict.absolute_deviation == 0.0;
        verdict.z = verdict.pass ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        verdict.z = (verdict.empirical_rate - p) / sigma;
        verdict.pass = verdict.absolute_deviation <= verdict.threshold;
    }
    return verdict;
}

}  // namespace bellport
