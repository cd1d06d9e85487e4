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

#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "bellport/gates.hpp"
#include "bellport/random.hpp"
#include "bellport/statevector.hpp"

namespace bellport {

inline std::vector<int> bits_from_string(const std::string& text) {
    std::vector<int> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        }
        bits.push_back(c - '0');
    }
    return bits;
}

inline std::string bits_to_string(const std::vector<int>& bits) {
    std::string text;
    text.reserve(bits.size());
    for (int b : bits) text.push_back(b ? '1' : '0');
    return text;
}

/**
 * The n-qubit state to send: alpha|x> + beta|x_bar>, where x_bar flips every
 * bit of x. Register budget: n data qubits, two channel qubits and one filter
 * ancilla, so n can reach kMaxQubits - 3.
 */
struct UnknownStateSpec {
    int n;
    std::vector<int> x;
    complex_t alpha;
    complex_t beta;

    UnknownStateSpec(int n_in, std::vector<int> x_in, complex_t alpha_in, complex_t beta_in)
        : n(n_in), x(std::move(x_in)), alpha(alpha_in), beta(beta_in) {
        if (n < 1) throw std::invalid_argument("state size n must be at least 1");
        if (n > kMaxQubits - 3) {
            throw std::length_error("state size n exceeds the simulable register budget");
        }
        if (static_cast<int>(x.size()) != n) {
            throw std::invalid_argument("bit string x must have exactly n bits");
        }
        for (int b : x) {
            if (b != 0 && b != 1) throw std::invalid_argument("bits of x must be 0 or 1");
        }
        const double norm = std::norm(alpha) + std::norm(beta);
        if (std::abs(norm - 1.0) > kNormTolerance) {
            throw std::invalid_argument("amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
        }
    }
};

/// Schmidt coefficients of the shared pair a|00> + b|11>, with 0 < b <= a.
struct ChannelSpec {
    double a;
    double b;

    ChannelSpec(double a_in, double b_in) : a(a_in), b(b_in) {
        if (!(a > 0.0) || !(b > 0.0)) {
            throw std::invalid_argument("channel coefficients must be positive reals");
        }
        if (std::abs(a * a + b * b - 1.0) > kNormTolerance) {
            throw std::invalid_argument("channel coefficients must satisfy a^2 + b^2 = 1");
        }
        if (b > a) {
            throw std::invalid_argument(kChannelOrderingHint);
        }
    }
};

/// The 2(n-1) + 2 classical bits Alice sends: the parity register outcome
/// plus her two-qubit measurement.
struct ClassicalMessage {
    std::vector<int> eprime_bits;
    int data_bit = 0;
    int bell_bit = 0;
};

enum class BranchClass { NForm, MForm };

/// Whether Bob attempts the conclusive filter on every branch or only on the
/// two N-form branches.
enum class BranchPolicy { NOnly, AllBranches };

inline const char* branch_class_name(BranchClass branch) {
    return branch == BranchClass::NForm ? "NForm" : "MForm";
}

inline const char* branch_policy_name(BranchPolicy policy) {
    return policy == BranchPolicy::NOnly ? "n-only" : "all";
}

/// A labeled snapshot of the register, recorded when tracing is requested.
struct TraceEntry {
    std::string label;
    PureState state;
};

struct TrialOutcome {
    bool success = false;
    ClassicalMessage message;
    BranchClass branch = BranchClass::NForm;
    StandardGate correction = StandardGate::I;
    double branch_probability = 0.0;
    double filter_probability = 0.0;
    std::optional<double> recovered_fidelity;
    std::vector<TraceEntry> trace;
};

struct AliceResult {
    ClassicalMessage message;
    PureState state;
    double branch_probability = 0.0;
};

struct FilterResult {
    bool success = false;
    double filter_probability = 0.0;
    PureState state;
};

inline bool is_canonical(const UnknownStateSpec& spec) { return spec.x[0] == 0; }

/// Rewrites alpha|x> + beta|x_bar> with the leading bit of x cleared. The two
/// descriptions name the same vector, so downstream code only ever handles
/// the x1 = 0 form.
inline UnknownStateSpec canonicalize(const UnknownStateSpec& spec) {
    if (is_canonical(spec)) return spec;
    std::vector<int> flipped(spec.x.size());
    for (std::size_t i = 0; i < spec.x.size(); ++i) flipped[i] = 1 - spec.x[i];
    return UnknownStateSpec(spec.n, std::move(flipped), spec.beta, spec.alpha);
}

inline PureState prepare_unknown_state(const UnknownStateSpec& spec) {
    std::uint64_t index = pack_bits(spec.x);
    std::uint64_t flipped = ~index & ((std::uint64_t{1} << spec.n) - 1);
    std::vector<complex_t> amps(std::uint64_t{1} << spec.n, complex_t{0.0, 0.0});
    amps[index] += spec.alpha;
    amps[flipped] += spec.beta;
    return PureState(spec.n, std::move(amps));
}

inline PureState prepare_channel_state(const ChannelSpec& channel) {
    return PureState(2, {complex_t{channel.a, 0.0}, 0.0, 0.0, complex_t{channel.b, 0.0}});
}

/// Unknown state on qubits 0..n-1, channel pair on qubits n and n+1 (Alice
/// holds qubit n, Bob qubit n+1). Callers canonicalize first.
inline PureState prepare_joint_state(const UnknownStateSpec& spec, const ChannelSpec& channel) {
    if (!is_canonical(spec)) {
        throw std::invalid_argument("prepare_joint_state expects a canonical spec (x1 = 0)");
    }
    return tensor(prepare_unknown_state(spec), prepare_channel_state(channel));
}

/// CNOTs from the data qubit onto qubits 1..n: the first n-1 turn the rest of
/// the unknown state into the parity pattern e', the last one entangles
/// Alice's channel qubit.
inline PureState alice_cnot_cascade(const PureState& state, int n) {
    if (state.num_qubits() != n + 2) {
        throw std::invalid_argument("cascade expects the n+2 qubit joint register");
    }
    const GateMatrix cnot = standard_gate(StandardGate::CNOT);
    PureState current = state;
    for (int target = 1; target <= n; ++target) {
        current = apply_gate(current, cnot, {0, target});
    }
    return current;
}

inline PureState alice_hadamard(const PureState& state) {
    return apply_gate(state, standard_gate(StandardGate::H), {0});
}

/// Parity bits the cascade pins onto qubits 1..n-1: e'_i = x_1 xor x_{i+1}.
inline std::vector<int> expected_eprime(const UnknownStateSpec& spec) {
    std::vector<int> eprime(spec.n - 1);
    for (int i = 0; i + 1 < spec.n; ++i) eprime[i] = spec.x[0] ^ spec.x[i + 1];
    return eprime;
}

namespace detail {

inline void record_trace(std::vector<TraceEntry>* trace, const char* label,
                         const PureState& state) {
    if (trace != nullptr) trace->push_back(TraceEntry{label, state});
}

}  // namespace detail

/**
 * Alice's half of a trial: build the joint register, run the cascade and the
 * Hadamard, then measure the parity register followed by her (data, channel)
 * pair. The parity outcome is deterministic; the pair outcome picks one of
 * the four branches with the returned probability.
 */
inline AliceResult run_alice(const UnknownStateSpec& spec, const ChannelSpec& channel,
                             RandomStream& rng, std::vector<TraceEntry>* trace = nullptr) {
    PureState state = prepare_joint_state(spec, channel);
    detail::record_trace(trace, "psi1_joint", state);
    state = alice_cnot_cascade(state, spec.n);
    detail::record_trace(trace, "psi2_cnot_cascade", state);
    state = alice_hadamard(state);
    detail::record_trace(trace, "psi3_hadamard", state);

    std::vector<int> eprime_targets;
    for (int q = 1; q < spec.n; ++q) eprime_targets.push_back(q);
    std::vector<int> eprime_bits;
    if (!eprime_targets.empty()) {
        MeasurementResult parity = measure(state, eprime_targets, rng);
        eprime_bits = parity.bits;
        state = parity.state;
    }
    detail::record_trace(trace, "psi4_eprime_measured", state);

    MeasurementResult pair = measure(state, {0, spec.n}, rng);
    AliceResult result{ClassicalMessage{std::move(eprime_bits), pair.bits[0], pair.bits[1]},
                       std::move(pair.state), pair.probability};
    return result;
}

inline BranchClass classify_branch(int bell_bit) {
    return bell_bit == 0 ? BranchClass::NForm : BranchClass::MForm;
}

/// Correction keyed on Alice's two bits: 00 -> I, 01 -> X, 10 -> Z, 11 -> iY.
/// Each choice leaves Bob's qubit at (alpha a, beta b) on N-form branches and
/// (alpha b, beta a) on M-form branches, with no residual phase.
inline StandardGate bob_select_correction(int data_bit, int bell_bit) {
    if (data_bit == 0) return bell_bit == 0 ? StandardGate::I : StandardGate::X;
    return bell_bit == 0 ? StandardGate::Z : StandardGate::iY;
}

inline FilterSpec filter_for_branch(const ChannelSpec& channel, BranchClass branch) {
    return FilterSpec(channel.a, channel.b,
                      branch == BranchClass::NForm ? FilterOrientation::ScaleZero
                                                   : FilterOrientation::ScaleOne);
}

/**
 * Bob's conclusive step. Adjoins a fresh ancilla, applies the filter matched
 * to the branch, and measures the ancilla; outcome 0 heralds success. Under
 * the NOnly policy the M-form branches skip the filter and report failure
 * with probability one.
 */
inline FilterResult bob_filter(const PureState& reg, const ChannelSpec& channel,
                               BranchClass branch, BranchPolicy policy, RandomStream& rng,
                               std::vector<TraceEntry>* trace = nullptr) {
    if (branch == BranchClass::MForm && policy == BranchPolicy::NOnly) {
        return FilterResult{false, 0.0, reg};
    }
    const int bob = reg.num_qubits() - 1;
    const int ancilla = reg.num_qubits();
    PureState state = tensor(reg, PureState(1));
    state = apply_gate(state, build_filter(filter_for_branch(channel, branch)), {bob, ancilla});
    detail::record_trace(trace, "psi5_filter_applied", state);

    const double filter_probability = branch_probabilities(state, {ancilla}).at(0);
    MeasurementResult herald = measure(state, {ancilla}, rng);
    detail::record_trace(trace, "psi6_ancilla_measured", herald.state);
    return FilterResult{herald.bits[0] == 0, filter_probability, std::move(herald.state)};
}

namespace detail {

/// Reads off a product qubit: every supported amplitude must agree on all
/// other qubits, which holds after the protocol's measurements.
inline PureState extract_qubit(const PureState& reg, int qubit) {
    const std::uint64_t mask = qubit_mask(reg.num_qubits(), qubit);
    std::uint64_t base = 0;
    bool seen = false;
    complex_t c0{0.0, 0.0};
    complex_t c1{0.0, 0.0};
    for (std::uint64_t i = 0; i < reg.dim(); ++i) {
        if (std::abs(reg[i]) <= kNormTolerance) continue;
        if (!seen) {
            base = i & ~mask;
            seen = true;
        } else if ((i & ~mask) != base) {
            throw std::logic_error("register does not factor as a product on this qubit");
        }
        ((i & mask) == 0 ? c0 : c1) = reg[i];
    }
    if (!seen) throw std::logic_error("register has no support above tolerance");
    const double norm = std::sqrt(std::norm(c0) + std::norm(c1));
    return PureState(1, {c0 / norm, c1 / norm});
}

inline PureState reconstruct_fanout(const PureState& state) {
    const GateMatrix cnot = standard_gate(StandardGate::CNOT);
    PureState current = state;
    for (int target = 1; target < state.num_qubits(); ++target) {
        current = apply_gate(current, cnot, {0, target});
    }
    return current;
}

}  // namespace detail

/// Bob's fresh n-qubit register after a successful filter: his recovered
/// qubit in front, the broadcast parity bits behind it.
inline PureState bob_prepare_with_eprime(const PureState& reg, const ClassicalMessage& message) {
    const int num = reg.num_qubits();
    for (std::uint64_t i = 0; i < reg.dim(); ++i) {
        if ((i & qubit_mask(num, num - 1)) != 0 && std::abs(reg[i]) > kNormTolerance) {
            throw std::logic_error("reconstruction requires a successful filter");
        }
    }
    PureState bob = detail::extract_qubit(reg, num - 2);
    if (message.eprime_bits.empty()) return bob;
    return tensor(bob, PureState::basis_state(static_cast<int>(message.eprime_bits.size()),
                                              pack_bits(message.eprime_bits)));
}

/// Rebuilds alpha|x> + beta|x_bar> (canonical form) from the filtered
/// register and the classical message, via CNOT fanout from the front qubit.
inline PureState bob_reconstruct(const PureState& reg, const ClassicalMessage& message) {
    return detail::reconstruct_fanout(bob_prepare_with_eprime(reg, message));
}

/**
 * One full sampled round: canonicalize, run Alice, apply Bob's correction,
 * attempt the filter, and on success rebuild the n-qubit state and score it
 * against the ideal by fidelity.
 */
inline TrialOutcome run_trial(const UnknownStateSpec& spec, const ChannelSpec& channel,
                              BranchPolicy policy, RandomStream& rng,
                              bool record_trace = false) {
    const UnknownStateSpec canonical = canonicalize(spec);
    TrialOutcome outcome;
    std::vector<TraceEntry>* trace = record_trace ? &outcome.trace : nullptr;

    AliceResult alice = run_alice(canonical, channel, rng, trace);
    outcome.message = alice.message;
    outcome.branch_probability = alice.branch_probability;
    outcome.branch = classify_branch(alice.message.bell_bit);
    outcome.correction = bob_select_correction(alice.message.data_bit, alice.message.bell_bit);

    const int bob = alice.state.num_qubits() - 1;
    PureState corrected =
        apply_gate(alice.state, standard_gate(outcome.correction), {bob});

    FilterResult filtered = bob_filter(corrected, channel, outcome.branch, policy, rng, trace);
    outcome.success = filtered.success;
    outcome.filter_probability = filtered.filter_probability;

    if (outcome.success) {
        PureState staged = bob_prepare_with_eprime(filtered.state, outcome.message);
        detail::record_trace(trace, "psi7_bob_with_eprime", staged);
        PureState rebuilt = detail::reconstruct_fanout(staged);
        detail::record_trace(trace, "psi8_reconstructed", rebuilt);
        outcome.recovered_fidelity = fidelity(rebuilt, prepare_unknown_state(canonical));
    }
    return outcome;
}

/// Haar-style random amplitude pair via four gaussians, for sampled sweeps.
inline std::pair<complex_t, complex_t> random_amplitude_pair(RandomStream& rng) {
    double g[4];
    for (int i = 0; i < 4; i += 2) {
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        g[i] = radius * std::cos(2.0 * std::numbers::pi * u2);
        g[i + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
    return {complex_t{g[0] / norm, g[1] / norm}, complex_t{g[2] / norm, g[3] / norm}};
}

}  // namespace bellport
