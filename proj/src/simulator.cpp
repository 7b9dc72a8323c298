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

#include "netqir/simulator.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "netqir/lowering.hpp"

namespace netqir {

size_t default_qubit_cap() {
    if (const char *env = std::getenv("NETQIR_QUBIT_CAP")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return 20;
}

namespace {

constexpr double kNormTolerance = 1e-9;

class Engine {
  public:
    Engine(const LoweredProgram &p, const SimulationOptions &o) : prog_(p), opt_(o), rng_(o.seed) {
        result_.state = GlobalState(o.cap);
        result_.bits.resize(p.ranks.size());
        pc_.assign(p.ranks.size(), 0);
        for (const auto &[q, a] : o.initial) result_.state.add(q, a[0], a[1]);
    }

    SimulationResult run() {
        const int n = static_cast<int>(prog_.ranks.size());
        while (true) {
            bool all_done = true;
            bool progress = false;
            for (int r = 0; r < n; ++r) {
                while (pc_[r] < prog_.ranks[r].size() && step(r)) progress = true;
                all_done = all_done && pc_[r] >= prog_.ranks[r].size();
            }
            if (all_done) break;
            if (!progress) deadlock();
        }
        return std::move(result_);
    }

  private:
    const LoweredProgram &prog_;
    SimulationOptions opt_;
    std::mt19937_64 rng_;
    SimulationResult result_;
    std::vector<size_t> pc_;

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    int &bit(int r, int b) {
        auto &v = result_.bits[r];
        if (static_cast<size_t>(b) >= v.size()) v.resize(b + 1, 0);
        return v[b];
    }

    void log(int r, const PrimitiveOp &op, const std::string &suffix = "") {
        ++result_.steps;
        if (!opt_.record_transcript) return;
        result_.transcript.push_back("step " + std::to_string(result_.steps) + " rank " + std::to_string(r) + " " +
                                     to_string(op, r) + suffix);
    }

    const PrimitiveOp *head(int r) const {
        return pc_[r] < prog_.ranks[r].size() ? &prog_.ranks[r][pc_[r]] : nullptr;
    }

    void check_norm(int r, const PrimitiveOp &op) {
        const double n = result_.state.norm();
        if (std::abs(n - 1.0) > kNormTolerance) {
            throw Error(ErrorCode::NormDrift, "state norm " + std::to_string(n) + " after rank " + std::to_string(r) + " " +
                                                  to_string(op, r));
        }
    }

    /// Executes the head op of rank r. Returns false if the rank is blocked.
    bool step(int r) {
        const PrimitiveOp &op = prog_.ranks[r][pc_[r]];
        auto &st = result_.state;
        switch (op.kind) {
            case PrimitiveOp::Kind::CSend:
            case PrimitiveOp::Kind::CRecv: {
                const bool sending = op.kind == PrimitiveOp::Kind::CSend;
                const int peer = op.peer;
                if (peer < 0 || peer >= static_cast<int>(prog_.ranks.size())) {
                    throw Error(ErrorCode::InvalidProgram, "message peer out of range");
                }
                const PrimitiveOp *other = head(peer);
                const auto wanted = sending ? PrimitiveOp::Kind::CRecv : PrimitiveOp::Kind::CSend;
                if (!other || other->kind != wanted || other->peer != r) return false;
                const PrimitiveOp &send = sending ? op : *other;
                const PrimitiveOp &recv = sending ? *other : op;
                const int sender = sending ? r : peer;
                const int receiver = sending ? peer : r;
                if (send.bits.size() != recv.bits.size()) {
                    throw Error(ErrorCode::InvalidProgram, "rank " + std::to_string(sender) + " sends " +
                                                               std::to_string(send.bits.size()) + " bits, rank " +
                                                               std::to_string(receiver) + " expects " +
                                                               std::to_string(recv.bits.size()));
                }
                std::string values;
                for (size_t k = 0; k < send.bits.size(); ++k) {
                    const int v = bit(sender, send.bits[k]);
                    bit(receiver, recv.bits[k]) = v;
                    values += (k ? " " : "") + std::to_string(v);
                }
                log(sender, send);
                log(receiver, recv, values.empty() ? "" : " = " + values);
                ++pc_[sender];
                ++pc_[receiver];
                return true;
            }
            case PrimitiveOp::Kind::AllocEpr:
            case PrimitiveOp::Kind::AllocGhz: st.alloc_entangled(op.qubits); log(r, op); break;
            case PrimitiveOp::Kind::Gate: st.apply(op.gate, op.qubits, op.theta); log(r, op); break;
            case PrimitiveOp::Kind::Measure: {
                const int v = st.measure(op.qubits[0], uniform());
                bit(r, op.bits[0]) = v;
                log(r, op, " = " + std::to_string(v));
                break;
            }
            case PrimitiveOp::Kind::Reset: st.reset(op.qubits[0], uniform()); log(r, op); break;
            case PrimitiveOp::Kind::Cond: {
                int parity = 0;
                for (int b : op.bits) parity ^= bit(r, b);
                if (parity) st.apply(op.gate, op.qubits);
                log(r, op, parity ? " applied" : " skipped");
                break;
            }
            case PrimitiveOp::Kind::Sync: log(r, op); break;
        }
        check_norm(r, op);
        ++pc_[r];
        return true;
    }

    [[noreturn]] void deadlock() const {
        std::ostringstream msg;
        msg << "blocked ranks:";
        bool first = true;
        for (size_t r = 0; r < prog_.ranks.size(); ++r) {
            const PrimitiveOp *op = head(static_cast<int>(r));
            if (!op) continue;
            msg << (first ? " " : ", ") << r << " ("
                << (op->kind == PrimitiveOp::Kind::CSend ? "csend to " : "crecv from ") << op->peer << ")";
            first = false;
        }
        throw Error(ErrorCode::Deadlock, msg.str());
    }
};

}  // namespace

SimulationResult simulate(const LoweredProgram &lowered, const SimulationOptions &options) {
    return Engine(lowered, options).run();
}

SimulationResult simulate_monolithic(const Program &program, int world_size, const SimulationOptions &options) {
    return simulate(lower_ideal(program, world_size), options);
}

}  // namespace netqir
