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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netqir/ir.hpp"
#include "netqir/lowered.hpp"
#include "netqir/state.hpp"

namespace netqir {

/// NETQIR_QUBIT_CAP when set to a positive integer, else 20.
size_t default_qubit_cap();

struct SimulationOptions {
    std::uint64_t seed = 0;
    size_t cap = default_qubit_cap();
    /// Qubits placed in the given state before the first operation.
    std::vector<std::pair<QubitId, std::array<Amplitude, 2>>> initial;
    bool record_transcript = true;
};

struct SimulationResult {
    GlobalState state;
    std::vector<std::string> transcript;  ///< `step <n> rank <r> <op> [result]`
    std::vector<std::vector<int>> bits;   ///< classical registers per rank
    long steps = 0;
};

/// Runs every rank of a lowered program over one global state vector.
/// CSEND blocks until the matching CRECV executes; ranks run round-robin,
/// each until it blocks.
///
/// Throws Error(Deadlock) when every unfinished rank is blocked,
/// Error(CapacityExceeded) and Error(NormDrift).
SimulationResult simulate(const LoweredProgram &lowered, const SimulationOptions &options = {});

/// Reference run of a program as one QPU, using the ideal lowering.
SimulationResult simulate_monolithic(const Program &program, int world_size, const SimulationOptions &options = {});

}  // namespace netqir
