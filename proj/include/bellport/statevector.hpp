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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellport/random.hpp"

namespace bellport {

using complex_t = std::complex<double>;

/// Largest register the dense representation will allocate (2^24 amplitudes).
inline constexpr int kMaxQubits = 24;

/// Tolerance for unitarity and normalization checks.
inline constexpr double kNormTolerance = 1e-12;

/// Tolerance for fidelity assertions.
inline constexpr double kFidelityTolerance = 1e-10;

/**
 * Index bit occupied by a qubit.
 *
 * Qubit 0 is the MOST significant bit of the amplitude index, so a basis
 * label |q0 q1 ... q_{n-1}> reads left to right like a written ket.
 */
inline std::uint64_t qubit_mask(int num_qubits, int qubit) {
    return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

namespace detail {

inline void check_targets(int num_qubits, const std::vector<int>& targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= num_qubits) {
            throw std::out_of_range("qubit index " + std::to_string(targets[i]) +
                                    " out of range for a " + std::to_string(num_qubits) +
                                    "-qubit register");
        }
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("duplicate target qubit " +
                                            std::to_string(targets[i]));
            }
        }
    }
}

inline int check_register_size(int num_qubits) {
    if (num_qubits < 0 || num_qubits > kMaxQubits) {
        throw std::length_error("register of " + std::to_string(num_qubits) +
                                " qubits exceeds the configured maximum of " +
                                std::to_string(kMaxQubits));
    }
    return num_qubits;
}

}  // namespace detail

/// Packs outcome bits (bits[0] most significant) into an integer key.
inline std::uint64_t pack_bits(const std::vector<int>& bits) {
    std::uint64_t value = 0;
    for (int bit : bits) value = (value << 1) | static_cast<std::uint64_t>(bit & 1);
    return value;
}

inline std::vector<int> unpack_bits(std::uint64_t value, std::size_t count) {
    std::vector<int> bits(count);
    for (std::size_t i = 0; i < count; ++i) {
        bits[count - 1 - i] = static_cast<int>((value >> i) & 1);
    }
    return bits;
}

/**
 * Unitary gate on `arity` qubits, stored row-major over the 2^arity basis.
 * Unitarity (max entry of U^dagger U - I within 1e-12) is checked once at
 * construction so application kernels can assume it.
 */
class GateMatrix {
  public:
    GateMatrix(int arity, std::vector<complex_t> entries)
        : arity_(arity), dim_(std::size_t{1} << arity), entries_(std::move(entries)) {
        if (arity_ < 1 || arity_ > kMaxQubits) {
            throw std::invalid_argument("gate arity must be between 1 and " +
                                        std::to_string(kMaxQubits));
        }
        if (entries_.size() != dim_ * dim_) {
            throw std::invalid_argument("gate matrix needs 2^arity x 2^arity entries");
        }
        for (const complex_t& e : entries_) {
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
                throw std::invalid_argument("gate matrix entries must be finite");
            }
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                complex_t sum{0.0, 0.0};
                for (std::size_t k = 0; k < dim_; ++k) {
                    sum += std::conj(at(k, r)) * at(k, c);
                }
                if (r == c) sum -= 1.0;
                if (std::abs(sum) > kNormTolerance) {
                    throw std::invalid_argument("gate matrix is not unitary");
                }
            }
        }
    }

    int arity() const { return arity_; }
    std::size_t dim() const { return dim_; }
    const complex_t& at(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

  private:
    int arity_;
    std::size_t dim_;
    std::vector<complex_t> entries_;
};

/**
 * Dense pure state of a qubit register.
 *
 * Always normalized: construction rejects amplitude vectors whose squared
 * norm strays from 1 by more than 1e-12, and the operations below renormalize
 * immediately after collapse. Post-measurement states keep their full size;
 * measured qubits are simply left in the observed basis state.
 */
class PureState {
  public:
    /// |00...0> on `num_qubits` qubits.
    explicit PureState(int num_qubits)
        : num_qubits_(detail::check_register_size(num_qubits)),
          amplitudes_(std::uint64_t{1} << num_qubits) {
        amplitudes_[0] = complex_t{1.0, 0.0};
    }

    static PureState basis_state(int num_qubits, std::uint64_t index) {
        PureState state(num_qubits);
        if (index >= state.dim()) {
            throw std::out_of_range("basis index out of range");
        }
        state.amplitudes_[0] = complex_t{0.0, 0.0};
        state.amplitudes_[index] = complex_t{1.0, 0.0};
        return state;
    }

    PureState(int num_qubits, std::vector<complex_t> amplitudes)
        : num_qubits_(detail::check_register_size(num_qubits)),
          amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != (std::uint64_t{1} << num_qubits_)) {
            throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
        }
        double norm2 = 0.0;
        for (const complex_t& amp : amplitudes_) {
            if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
                throw std::invalid_argument("amplitudes must be finite");
            }
            norm2 += std::norm(amp);
        }
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not normalized: squared norm " +
                                        std::to_string(norm2));
        }
    }

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return amplitudes_.size(); }
    const std::vector<complex_t>& amplitudes() const { return amplitudes_; }
    const complex_t& operator[](std::uint64_t index) const { return amplitudes_[index]; }

    double norm_squared() const {
        double norm2 = 0.0;
        for (const complex_t& amp : amplitudes_) norm2 += std::norm(amp);
        return norm2;
    }

  private:
    int num_qubits_;
    std::vector<complex_t> amplitudes_;
};

/// Kronecker product; `left`'s qubits become the high-order qubits.
inline PureState tensor(const PureState& left, const PureState& right) {
    const int combined = left.num_qubits() + right.num_qubits();
    detail::check_register_size(combined);
    std::vector<complex_t> out(std::uint64_t{1} << combined);
    for (std::uint64_t i = 0; i < left.dim(); ++i) {
        for (std::uint64_t j = 0; j < right.dim(); ++j) {
            out[(i << right.num_qubits()) | j] = left[i] * right[j];
        }
    }
    return PureState(combined, std::move(out));
}

/**
 * Applies `gate` to the given target qubits (identity elsewhere).
 *
 * targets[0] is the most significant bit of the gate's basis index, matching
 * the register convention, so a CNOT applied to {c, t} reads |c t>.
 */
inline PureState apply_gate(const PureState& state, const GateMatrix& gate,
                            const std::vector<int>& targets) {
    detail::check_targets(state.num_qubits(), targets);
    if (targets.size() != static_cast<std::size_t>(gate.arity())) {
        throw std::invalid_argument("target count must match gate arity");
    }
    const int n = state.num_qubits();
    const std::size_t k = targets.size();
    const std::uint64_t dim = state.dim();
    const std::size_t gdim = gate.dim();

    std::uint64_t all_mask = 0;
    std::vector<std::uint64_t> scatter(gdim, 0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint64_t mask = qubit_mask(n, targets[j]);
        all_mask |= mask;
        const std::size_t gate_bit = k - 1 - j;
        for (std::size_t g = 0; g < gdim; ++g) {
            if ((g >> gate_bit) & 1) scatter[g] |= mask;
        }
    }

    std::vector<complex_t> out(state.amplitudes());
    std::vector<complex_t> block(gdim);
    std::uint64_t base = 0;
    while (true) {
        for (std::size_t g = 0; g < gdim; ++g) block[g] = state[base | scatter[g]];
        for (std::size_t r = 0; r < gdim; ++r) {
            complex_t acc{0.0, 0.0};
            for (std::size_t c = 0; c < gdim; ++c) acc += gate.at(r, c) * block[c];
            out[base | scatter[r]] = acc;
        }
        const std::uint64_t next = (base | all_mask) + 1;
        if (next >= dim) break;
        base = next & ~all_mask;
    }
    return PureState(n, std::move(out));
}

/**
 * Born probabilities of every outcome of measuring `targets` jointly.
 * Keys pack the outcome bits with targets[0] as the most significant bit;
 * all 2^k outcomes are present. Cost grows with 2^|targets|.
 */
inline std::map<std::uint64_t, double> branch_probabilities(
    const PureState& state, const std::vector<int>& targets) {
    detail::check_targets(state.num_qubits(), targets);
    const std::size_t k = targets.size();
    std::vector<int> shifts(k);
    for (std::size_t j = 0; j < k; ++j) {
        shifts[j] = state.num_qubits() - 1 - targets[j];
    }
    std::vector<double> probs(std::uint64_t{1} << k, 0.0);
    for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
        std::uint64_t outcome = 0;
        for (std::size_t j = 0; j < k; ++j) {
            outcome = (outcome << 1) | ((idx >> shifts[j]) & 1);
        }
        probs[outcome] += std::norm(state[idx]);
    }
    std::map<std::uint64_t, double> result;
    for (std::uint64_t outcome = 0; outcome < probs.size(); ++outcome) {
        result.emplace(outcome, probs[outcome]);
    }
    return result;
}

struct MeasurementResult {
    std::vector<int> bits;  ///< observed outcome, one entry per target
    double probability;     ///< exact pre-measurement Born probability
    PureState state;        ///< collapsed and renormalized register
};

/**
 * Deterministic collapse onto a specific outcome of the target qubits.
 * The exact enumeration paths use this in place of sampling.
 */
inline MeasurementResult project(const PureState& state, const std::vector<int>& targets,
                                 const std::vector<int>& outcome) {
    detail::check_targets(state.num_qubits(), targets);
    if (outcome.size() != targets.size()) {
        throw std::invalid_argument("outcome length must match target count");
    }
    std::uint64_t sel_mask = 0;
    std::uint64_t sel_value = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (outcome[j] != 0 && outcome[j] != 1) {
            throw std::invalid_argument("outcome bits must be 0 or 1");
        }
        const std::uint64_t mask = qubit_mask(state.num_qubits(), targets[j]);
        sel_mask |= mask;
        if (outcome[j]) sel_value |= mask;
    }
    double probability = 0.0;
    for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
        if ((idx & sel_mask) == sel_value) probability += std::norm(state[idx]);
    }
    if (probability <= 0.0) {
        throw std::invalid_argument("projection onto a zero-probability outcome");
    }
    const double scale = 1.0 / std::sqrt(probability);
    std::vector<complex_t> out(state.dim());
    for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
        out[idx] = ((idx & sel_mask) == sel_value) ? state[idx] * scale : complex_t{0.0, 0.0};
    }
    return MeasurementResult{outcome, probability, PureState(state.num_qubits(), std::move(out))};
}

/// Samples a joint measurement of `targets` per the Born rule and collapses.
inline MeasurementResult measure(const PureState& state, const std::vector<int>& targets,
                                 RandomStream& rng) {
    const auto probs = branch_probabilities(state, targets);
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::uint64_t chosen = 0;
    std::uint64_t last_nonzero = 0;
    bool found = false;
    for (const auto& [outcome, p] : probs) {
        if (p > 0.0) last_nonzero = outcome;
        cumulative += p;
        if (!found && p > 0.0 && u < cumulative) {
            chosen = outcome;
            found = true;
        }
    }
    if (!found) chosen = last_nonzero;  // u landed past the rounded total
    return project(state, targets, unpack_bits(chosen, targets.size()));
}

inline complex_t inner_product(const PureState& left, const PureState& right) {
    if (left.num_qubits() != right.num_qubits()) {
        throw std::invalid_argument("inner product requires equal register sizes");
    }
    complex_t acc{0.0, 0.0};
    for (std::uint64_t idx = 0; idx < left.dim(); ++idx) {
        acc += std::conj(left[idx]) * right[idx];
    }
    return acc;
}

/// Squared magnitude of the overlap; 1 means the same physical state.
inline double fidelity(const PureState& state, const PureState& reference) {
    return std::norm(inner_product(state, reference));
}

}  // namespace bellport
