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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netqir/comm.hpp"
#include "netqir/intrinsics.hpp"
#include "netqir/ir.hpp"

namespace netqir {

/// One quantum or communication action of a single rank, with every operand
/// resolved to a constant.
struct TraceOp {
    enum class Kind { Gate, Measure, Reset, Comm, Initialize, Finalize };

    Kind kind = Kind::Gate;
    GateKind gate = GateKind::H;
    double theta = 0.0;
    std::vector<std::int64_t> qubits;  ///< Gate/Measure/Reset operand addresses
    std::int64_t result = 0;           ///< Measure: result address

    std::string callee;                ///< Comm: intrinsic symbol
    IntrinsicClassification cls;
    /// Comm: one entry per signature parameter. Addresses and integers are
    /// stored as is; the communicator parameter holds 0 and is in `comm`.
    std::vector<std::int64_t> args;
    CommHandle comm;
    GateKind fold = GateKind::CNOT;
    SourceLoc loc;
};

struct RankTrace {
    int rank = 0;
    std::vector<TraceOp> ops;
};

/// Runs the entry function once per rank of a world of `world_size`
/// processes, folding comm_rank/comm_size, integer arithmetic and branches.
/// Throws Error(InvalidProgram) if the program does not validate and
/// Error(UnsupportedProgram) for control flow that cannot be folded.
std::vector<RankTrace> trace(const Program &program, int world_size);

/// Smallest world size consistent with the rank constants in the program
/// (branch comparisons, peers, group members, collective
/// count ratios); at least 2.
int infer_world_size(const Program &program);

}  // namespace netqir
