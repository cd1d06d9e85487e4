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

#include <algorithm>

#include "bellport/statevector.hpp"

namespace bellport {

enum class StandardGate { I, X, Z, iY, H, CNOT };

inline const char* gate_name(StandardGate gate) {
    switch (gate) {
        case StandardGate::I: return "I";
        case StandardGate::X: return "X";
        case StandardGate::Z: return "Z";
        case StandardGate::iY: return "iY";
        case StandardGate::H: return "H";
        case StandardGate::CNOT: return "CNOT";
    }
    return "?";
}

/// Fixed protocol gates. iY is the real matrix [[0,1],[-1,0]]; CNOT reads
/// |control target> with the control as the high bit.
inline GateMatrix standard_gate(StandardGate gate) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (gate) {
        case StandardGate::I:
            return GateMatrix(1, {1, 0, 0, 1});
        case StandardGate::X:
            return GateMatrix(1, {0, 1, 1, 0});
        case StandardGate::Z:
            return GateMatrix(1, {1, 0, 0, -1});
        case StandardGate::iY:
            return GateMatrix(1, {0, 1, -1, 0});
        case StandardGate::H:
            return GateMatrix(1, {h, h, h, -h});
        case StandardGate::CNOT:
            return GateMatrix(2, {1, 0, 0, 0,
                                  0, 1, 0, 0,
                                  0, 0, 0, 1,
                                  0, 0, 1, 0});
    }
    throw std::invalid_argument("unknown gate name");
}

/// Which logical amplitude the filter scales by b/a on its ancilla-0 block.
enum class FilterOrientation { ScaleZero, ScaleOne };

inline constexpr const char* kChannelOrderingHint =
    "channel coefficients must satisfy 0 < b <= a; normalize the channel by relabeling its "
    "basis (swap the roles of a and b) so the larger coefficient comes first";

/**
 * Channel Schmidt coefficients feeding a filter unitary. Requires
 * a^2 + b^2 = 1 and 0 < b <= a; with b > a the filter entries
 * sqrt(1 - b^2/a^2) stop being real.
 */
struct FilterSpec {
    double a;
    double b;
    FilterOrientation orientation;

    FilterSpec(double a_in, double b_in, FilterOrientation orientation_in)
        : a(a_in), b(b_in), orientation(orientation_in) {
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

/**
 * Conclusive filter on |qubit, ancilla> (ancilla least significant).
 *
 * On the ancilla-0 block it scales the qubit's |0> amplitude by b/a, so an
 * input (alpha a)|00> + (beta b)|10> becomes b(alpha|0> + beta|1>)|0> plus a
 * residual sqrt(1 - b^2/a^2) alpha a |11> heralding failure.
 */
inline GateMatrix build_u1(const FilterSpec& spec) {
    if (spec.orientation != FilterOrientation::ScaleZero) {
        throw std::invalid_argument("build_u1 expects a ScaleZero filter spec");
    }
    const double r = spec.b / spec.a;
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    return GateMatrix(2, {r, s, 0, 0,
                          0, 0, 0, -1,
                          0, 0, 1, 0,
                          s, -r, 0, 0});
}

/**
 * Mirror-orientation filter: scales the qubit's |1> amplitude by b/a on the
 * ancilla-0 block, with the residual routed to |11>. The rows outside that
 * block are completed to a unitary in the same pattern as the ScaleZero
 * filter; only the ancilla-0 block is contractually observable.
 */
inline GateMatrix build_mirror_filter(const FilterSpec& spec) {
    if (spec.orientation != FilterOrientation::ScaleOne) {
        throw std::invalid_argument("build_mirror_filter expects a ScaleOne filter spec");
    }
    const double r = spec.b / spec.a;
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    return GateMatrix(2, {1, 0, 0, 0,
                          0, -1, 0, 0,
                          0, 0, r, s,
                          0, 0, s, -r});
}

inline GateMatrix build_filter(const FilterSpec& spec) {
    return spec.orientation == FilterOrientation::ScaleZero ? build_u1(spec)
                                                            : build_mirror_filter(spec);
}

}  // namespace bellport
