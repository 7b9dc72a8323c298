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
#include <string>
#include <vector>

#include "netqir/ir.hpp"
#include "netqir/topology.hpp"

namespace netqir {

/// Physical qubit: a data qubit at a static address, or a communication
/// qubit of a rank's comm pool.
struct QubitId {
    enum class Space { Data, Comm };

    int rank = 0;
    Space space = Space::Data;
    std::int64_t index = 0;

    static QubitId data(int rank, std::int64_t index) { return {rank, Space::Data, index}; }
    static QubitId comm(int rank, std::int64_t index) { return {rank, Space::Comm, index}; }

    friend auto operator<=>(const QubitId &, const QubitId &) = default;
};

/// `q3@1` or `c0@2`; the `@rank` suffix is dropped when it equals `self`.
std::string to_string(const QubitId &q, int self = -1);

struct PrimitiveOp {
    enum class Kind { AllocEpr, AllocGhz, Gate, Measure, Reset, CSend, CRecv, Cond, Sync };

    Kind kind = Kind::Gate;
    GateKind gate = GateKind::H;        ///< Gate; Cond (X or Z)
    double theta = 0.0;
    std::vector<QubitId> qubits;        ///< allocation members, gate operands, or the single target
    std::vector<int> bits;              ///< Measure: [out]; CSend: sent; CRecv: received; Cond: parity inputs
    int peer = -1;                      ///< CSend destination / CRecv source
    int sync_id = -1;
    /// Allocations: communication qubits charged to the network. Equal to
    /// qubits.size() except where the topology cost table says otherwise.
    int consumed = 0;
};

/// One lowered communication intrinsic.
struct LedgerEntry {
    std::string intrinsic;
    std::vector<int> ranks;   ///< world ranks taking part, in communicator order
    std::string protocol;     ///< teledata | telegate | ghz | classical | local
    long comm_qubits = 0;
    long syncs = 0;
};

struct LoweredProgram {
    int world_size = 0;
    Topology topology;
    bool ideal = false;  ///< produced by the monolithic oracle backend
    /// One stream per compute rank, plus the relay's stream under ViaCommunicator.
    std::vector<std::vector<PrimitiveOp>> ranks;
    std::vector<LedgerEntry> ledger;

    /// Sum of `consumed` over all allocations.
    long total_comm_qubits() const;
    /// Communication qubits allocated on each rank (relay last).
    std::vector<long> comm_qubits_per_rank() const;
    long sync_points() const;
    long count(PrimitiveOp::Kind kind) const;
};

std::string to_string(const PrimitiveOp &op, int self);
std::string to_text(const LoweredProgram &lowered);

}  // namespace netqir
