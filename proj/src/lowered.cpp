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

#include "netqir/lowered.hpp"

#include <sstream>

#include "netqir/parser.hpp"

namespace netqir {

std::string to_string(const QubitId &q, int self) {
    std::string s = (q.space == QubitId::Space::Data ? "q" : "c") + std::to_string(q.index);
    if (q.rank != self) s += "@" + std::to_string(q.rank);
    return s;
}

namespace {

std::string bit_list(const std::vector<int> &bits) {
    std::string s;
    for (int b : bits) s += " b" + std::to_string(b);
    return s;
}

std::string lower_name(GateKind g) {
    std::string s = to_string(g);
    for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string to_string(const PrimitiveOp &op, int self) {
    std::ostringstream out;
    switch (op.kind) {
        case PrimitiveOp::Kind::AllocEpr:
        case PrimitiveOp::Kind::AllocGhz:
            out << (op.kind == PrimitiveOp::Kind::AllocEpr ? "alloc_epr" : "alloc_ghz");
            for (const auto &q : op.qubits) out << " " << to_string(q, self);
            if (op.consumed != static_cast<int>(op.qubits.size())) out << " consumed=" << op.consumed;
            break;
        case PrimitiveOp::Kind::Gate:
            out << "gate " << lower_name(op.gate);
            if (gate_is_parametric(op.gate)) out << " " << format_double(op.theta);
            for (const auto &q : op.qubits) out << " " << to_string(q, self);
            break;
        case PrimitiveOp::Kind::Measure: out << "measure " << to_string(op.qubits[0], self) << " -> b" << op.bits[0]; break;
        case PrimitiveOp::Kind::Reset: out << "reset " << to_string(op.qubits[0], self); break;
        case PrimitiveOp::Kind::CSend: out << "csend " << op.peer << bit_list(op.bits); break;
        case PrimitiveOp::Kind::CRecv: out << "crecv " << op.peer << bit_list(op.bits); break;
        case PrimitiveOp::Kind::Cond:
            out << "cond " << lower_name(op.gate) << " " << to_string(op.qubits[0], self) << bit_list(op.bits);
            break;
        case PrimitiveOp::Kind::Sync: out << "sync " << op.sync_id; break;
    }
    return out.str();
}

long LoweredProgram::total_comm_qubits() const {
    long total = 0;
    for (const auto &stream : ranks) {
        for (const auto &op : stream) {
            if (op.kind == PrimitiveOp::Kind::AllocEpr || op.kind == PrimitiveOp::Kind::AllocGhz) total += op.consumed;
        }
    }
    return total;
}

std::vector<long> LoweredProgram::comm_qubits_per_rank() const {
    std::vector<long> out(ranks.size(), 0);
    for (const auto &stream : ranks) {
        for (const auto &op : stream) {
            if (op.kind != PrimitiveOp::Kind::AllocEpr && op.kind != PrimitiveOp::Kind::AllocGhz) continue;
            for (const auto &q : op.qubits) {
                if (q.rank >= 0 && q.rank < static_cast<int>(out.size())) ++out[q.rank];
            }
        }
    }
    return out;
}

long LoweredProgram::sync_points() const { return count(PrimitiveOp::Kind::Sync); }

long LoweredProgram::count(PrimitiveOp::Kind kind) const {
    long n = 0;
    for (const auto &stream : ranks) {
        for (const auto &op : stream) n += op.kind == kind;
    }
    return n;
}

std::string to_text(const LoweredProgram &lowered) {
    std::ostringstream out;
    out << "; lowered " << (lowered.ideal ? "ideal" : "physical") << " world_size=" << lowered.world_size
        << " topology=" << to_string(lowered.topology.kind) << "\n";
    for (size_t r = 0; r < lowered.ranks.size(); ++r) {
        out << "rank " << r;
        if (static_cast<int>(r) == lowered.topology.relay()) out << " (relay)";
        out << ":\n";
        for (const auto &op : lowered.ranks[r]) out << "  " << to_string(op, static_cast<int>(r)) << "\n";
    }
    out << "ledger:\n";
    for (const auto &e : lowered.ledger) {
        out << "  " << e.intrinsic << " ranks=";
        for (size_t i = 0; i < e.ranks.size(); ++i) out << (i ? "," : "") << e.ranks[i];
        out << " protocol=" << e.protocol << " comm_qubits=" << e.comm_qubits << " syncs=" << e.syncs << "\n";
    }
    out << "total comm_qubits=" << lowered.total_comm_qubits() << " syncs=" << lowered.sync_points() << "\n";
    return out.str();
}

}  // namespace netqir
