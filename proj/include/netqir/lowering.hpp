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

#include "netqir/intrinsics.hpp"
#include "netqir/ir.hpp"
#include "netqir/lowered.hpp"
#include "netqir/topology.hpp"
#include "netqir/trace.hpp"

namespace netqir {

/// How expose shares its qubit with the other members of the communicator.
enum class ExposeMode { Ghz, Teledata, Telegate };

const char *to_string(ExposeMode m);

struct LoweringOptions {
    /// Protocol for intrinsics without a suffix. Unspecified selects per
    /// intrinsic with resolve_protocol (point-to-point) or teledata (collectives).
    Protocol default_protocol = Protocol::Unspecified;
    ExposeMode expose = ExposeMode::Ghz;
    /// Lower a send or receive with no partner one-sided instead of failing.
    /// The result then deadlocks when simulated.
    bool allow_unmatched = false;
};

/// Options reproducing one QFT cost-curve strategy.
LoweringOptions options_for(Strategy s);

/// How a receiver uses a received qubit before it is redefined.
struct ReferenceUsage {
    int uses = 0;
    bool all_commuting = true;  ///< every use is Z, CZ, CP or the control of CNOT
};

/// Protocol for one send/receive pair. Throws Error(ProtocolMismatch) when
/// both sides name different protocols.
Protocol resolve_protocol(Protocol send_side, Protocol recv_side, const ReferenceUsage &usage, const Topology &topology);

/// True if applying `op` leaves a qubit at `address` usable through a
/// shared control reference (gates diagonal in its computational basis).
bool is_reference_use(const TraceOp &op, std::int64_t address);

/// Compiles every communication intrinsic into primitive operations.
/// The world has topology.qpus compute ranks.
///
/// Throws Error(InvalidProgram | ProtocolMismatch | UnmatchedEndpoint |
/// IndivisibleCount | RootOutOfRange | CollectiveMismatch | NonCommutingReference).
LoweredProgram lower(const Program &program, const Topology &topology, const LoweringOptions &options = {});
LoweredProgram lower(const std::vector<RankTrace> &traces, const Topology &topology, const LoweringOptions &options = {});

/// Reference lowering with no communication resources: moves become swaps,
/// shared references become direct cross-rank gates.
LoweredProgram lower_ideal(const Program &program, int world_size, const LoweringOptions &options = {});

}  // namespace netqir
