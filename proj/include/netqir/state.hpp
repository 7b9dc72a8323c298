// Copyright 2026 The netqir-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "netqir/ir.hpp"
#include "netqir/lowered.hpp"

namespace netqir {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

/// State vector over every live qubit of every rank.
///
/// Qubits join the vector on first touch in |0> (or their last classical
/// value). Measured and reset qubits are factored back out and remembered
/// as classical values, so only entangled or superposed qubits occupy space.
class GlobalState {
  public:
    explicit GlobalState(size_t cap = 20);

    size_t live() const { return order_.size(); }
    size_t cap() const { return cap_; }
    bool is_live(const QubitId &q) const { return pos_.count(q) > 0; }
    /// Value of a qubit that is not live: its last measured/reset value, or 0.
    int classical_value(const QubitId &q) const;

    /// Adds a fresh qubit in state a0|0> + a1|1>. Throws Error(CapacityExceeded).
    void add(const QubitId &q, Amplitude a0, Amplitude a1);

    void apply(GateKind g, const std::vector<QubitId> &qubits, double theta = 0.0);
    /// Projects onto a computational basis outcome chosen with `u` in [0,1),
    /// factors the qubit out and returns the outcome.
    int measure(const QubitId &q, double u);
    void reset(const QubitId &q, double u);

    void alloc_entangled(const std::vector<QubitId> &qubits);

    double norm() const;
    const StateVector &amplitudes() const { return amps_; }
    const std::vector<QubitId> &order() const { return order_; }

    /// Pure state of `subset` (first element is the most significant bit).
    /// Throws Error(MismatchedSubset) if the subset is entangled with the rest.
    StateVector extract(const std::vector<QubitId> &subset, double tolerance = 1e-9) const;

    /// Probability that `q` reads 1.
    double probability_one(const QubitId &q) const;

  private:
    size_t cap_;
    StateVector amps_;
    std::vector<QubitId> order_;
    std::map<QubitId, size_t> pos_;
    std::map<QubitId, int> classical_;

    size_t ensure(const QubitId &q);
    void remove(const QubitId &q, int value);
};

/// |<a|b>|^2. Throws Error(MismatchedSubset) on different lengths.
double fidelity(const StateVector &a, const StateVector &b);
/// Fidelity of two subsystems extracted from two global states.
double fidelity(const GlobalState &a, const GlobalState &b, const std::vector<QubitId> &subset_a,
                const std::vector<QubitId> &subset_b);

/// Infinity-norm distance after aligning the global phase of `a` to `b`.
double max_abs_diff_up_to_phase(const StateVector &a, const StateVector &b);

/// Product state |s_0> (x) |s_1> (x) ... with s_0 most significant.
StateVector tensor_product(const std::vector<std::array<Amplitude, 2>> &factors);

}  // namespace netqir
