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

#include "netqir/lowering.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace netqir {

const char *to_string(ExposeMode m) {
    switch (m) {
        case ExposeMode::Ghz: return "ghz";
        case ExposeMode::Teledata: return "teledata";
        case ExposeMode::Telegate: return "telegate";
    }
    return "?";
}

LoweringOptions options_for(Strategy s) {
    LoweringOptions o;
    switch (s) {
        case Strategy::Teledata:
            o.default_protocol = Protocol::Teledata;
            o.expose = ExposeMode::Teledata;
            break;
        case Strategy::Telegate:
            o.default_protocol = Protocol::Telegate;
            o.expose = ExposeMode::Telegate;
            break;
        case Strategy::Expose: o.expose = ExposeMode::Ghz; break;
    }
    return o;
}

Protocol resolve_protocol(Protocol send_side, Protocol recv_side, const ReferenceUsage &usage, const Topology &topology) {
    if (send_side != Protocol::Unspecified && recv_side != Protocol::Unspecified) {
        if (send_side != recv_side) {
            throw Error(ErrorCode::ProtocolMismatch, std::string("send uses ") + to_string(send_side) + ", receive uses " +
                                                         to_string(recv_side));
        }
        return send_side;
    }
    if (send_side != Protocol::Unspecified) return send_side;
    if (recv_side != Protocol::Unspecified) return recv_side;
    if (usage.uses == 0 || !usage.all_commuting) return Protocol::Teledata;
    const long teledata = per_epoch_cost(Strategy::Teledata, topology.kind, 1);
    const long telegate = per_epoch_cost(Strategy::Telegate, topology.kind, 1);
    return telegate <= teledata ? Protocol::Telegate : Protocol::Teledata;
}

bool is_reference_use(const TraceOp &op, std::int64_t address) {
    if (op.kind != TraceOp::Kind::Gate) return false;
    for (size_t p = 0; p < op.qubits.size(); ++p) {
        if (op.qubits[p] != address) continue;
        switch (op.gate) {
            case GateKind::Z:
            case GateKind::CZ:
            case GateKind::CP: break;
            case GateKind::CNOT:
                if (p != 0) return false;
                break;
            default: return false;
        }
    }
    return true;
}

namespace {

std::string where(const TraceOp &op) { return op.loc.line ? " at " + to_string(op.loc) : ""; }

std::vector<std::int64_t> range(std::int64_t base, std::int64_t count) {
    std::vector<std::int64_t> out;
    for (std::int64_t k = 0; k < count; ++k) out.push_back(base + k);
    return out;
}

/// Position of the root argument of a collective, or -1.
int root_arg(const TraceOp &op) {
    switch (op.cls.base) {
        case IntrinsicBase::Expose: return op.cls.array ? 2 : 1;
        case IntrinsicBase::Scatter:
        case IntrinsicBase::Gather:
        case IntrinsicBase::Reduce: return 4;
        default: return -1;
    }
}

int local_index(const CommHandle &comm, int world_rank) {
    auto it = std::find(comm.members.begin(), comm.members.end(), world_rank);
    return it == comm.members.end() ? -1 : static_cast<int>(it - comm.members.begin());
}

bool is_root(const TraceOp &op, int rank) {
    const int a = root_arg(op);
    return a >= 0 && local_index(op.comm, rank) == op.args[a];
}

/// Addresses whose current state the op reads.
std::vector<std::int64_t> used_addresses(const TraceOp &op, int rank) {
    if (op.kind != TraceOp::Kind::Comm) return op.qubits;
    const auto &a = op.args;
    switch (op.cls.base) {
        case IntrinsicBase::QSend:
        case IntrinsicBase::MeasureSend: return op.cls.array ? range(a[0], a[1]) : std::vector<std::int64_t>{a[0]};
        case IntrinsicBase::Expose:
            if (!is_root(op, rank)) return {};
            return op.cls.array ? range(a[0], a[1]) : std::vector<std::int64_t>{a[0]};
        case IntrinsicBase::Scatter: return is_root(op, rank) ? range(a[0], a[1]) : std::vector<std::int64_t>{};
        case IntrinsicBase::Gather:
        case IntrinsicBase::Reduce: return range(a[0], a[1]);
        default: return {};
    }
}

/// Addresses the op overwrites with new contents.
std::vector<std::int64_t> defined_addresses(const TraceOp &op, int rank) {
    if (op.kind != TraceOp::Kind::Comm) return {};
    const auto &a = op.args;
    switch (op.cls.base) {
        case IntrinsicBase::QRecv: return op.cls.array ? range(a[0], a[1]) : std::vector<std::int64_t>{a[0]};
        case IntrinsicBase::Expose:
            if (is_root(op, rank)) return {};
            return op.cls.array ? range(a[0], a[1]) : std::vector<std::int64_t>{a[0]};
        case IntrinsicBase::Scatter: return range(a[2], a[3]);
        case IntrinsicBase::Gather:
        case IntrinsicBase::Reduce: return is_root(op, rank) ? range(a[2], a[3]) : std::vector<std::int64_t>{};
        default: return {};
    }
}

bool contains(const std::vector<std::int64_t> &v, std::int64_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

class Lowerer {
  public:
    Lowerer(const std::vector<RankTrace> &traces, const Topology &topology, const LoweringOptions &options, bool ideal)
        : traces_(traces), topo_(topology), opt_(options), ideal_(ideal) {
        world_ = static_cast<int>(traces.size());
        out_.world_size = world_;
        out_.topology = topology;
        out_.ideal = ideal;
        relay_ = (!ideal && topology.kind == Topology::Kind::ViaCommunicator) ? world_ : -1;
        out_.topology.qpus = world_;
        if (ideal) out_.topology.kind = Topology::Kind::DirectConnected;
        const int streams = world_ + (relay_ >= 0 ? 1 : 0);
        out_.ranks.resize(streams);
        state_.resize(streams);
    }

    LoweredProgram run() {
        while (true) {
            bool all_done = true;
            bool progress = false;
            for (int r = 0; r < world_; ++r) {
                if (state_[r].done) continue;
                progress = advance(r) || progress;
                all_done = all_done && state_[r].done;
            }
            if (all_done) break;
            if (!progress && !unilateral()) stuck();
        }
        return std::move(out_);
    }

  private:
    struct Alias {
        QubitId target;
        bool ready = true;
        int group = -1;
        long end_index = -1;
        bool end_pending = false;
    };

    enum class GroupKind { TelegateDirect, TelegateRelay, Ghz, TeledataDirect, TeledataRelay, Ideal };

    struct Member {
        int rank = 0;
        std::int64_t slot = 0;
        QubitId qubit;  ///< the member's copy or reference
        bool settled = false;
    };

    struct Group {
        GroupKind kind = GroupKind::Ideal;
        int owner = 0;
        std::int64_t addr = 0;
        QubitId psi;
        std::vector<Member> members;
        int remaining = 0;
        std::vector<int> parity;
        QubitId relay_qubit;  ///< TelegateRelay: relay's reference; TeledataRelay: current holder
        size_t chain = 0;     ///< Teledata*: member currently holding the state
        int ledger = -1;
        bool track_busy = true;
    };

    struct RankState {
        size_t pc = 0;
        bool done = false;
        std::map<std::int64_t, Alias> aliases;
        std::map<std::int64_t, int> busy;
        int next_comm = 0;
        int next_bit = 0;
    };

    const std::vector<RankTrace> &traces_;
    Topology topo_;
    LoweringOptions opt_;
    bool ideal_;
    int world_ = 0;
    int relay_ = -1;
    LoweredProgram out_;
    std::vector<RankState> state_;
    std::vector<Group> groups_;
    int ledger_ = -1;
    int next_sync_ = 0;

    // ------------------------------------------------------------------
    // Primitive emission

    void push(int r, PrimitiveOp op) { out_.ranks[r].push_back(std::move(op)); }

    void gate(int r, GateKind g, std::vector<QubitId> qs, double theta = 0.0) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::Gate;
        op.gate = g;
        op.theta = theta;
        op.qubits = std::move(qs);
        push(r, std::move(op));
    }

    int measure(int r, QubitId q) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::Measure;
        op.qubits = {q};
        const int bit = state_[r].next_bit++;
        op.bits = {bit};
        push(r, std::move(op));
        return bit;
    }

    void reset(int r, QubitId q) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::Reset;
        op.qubits = {q};
        push(r, std::move(op));
    }

    void csend(int r, int to, std::vector<int> bits) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::CSend;
        op.peer = to;
        op.bits = std::move(bits);
        push(r, std::move(op));
    }

    std::vector<int> crecv(int r, int from, size_t n) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::CRecv;
        op.peer = from;
        for (size_t k = 0; k < n; ++k) op.bits.push_back(state_[r].next_bit++);
        std::vector<int> bits = op.bits;
        push(r, std::move(op));
        return bits;
    }

    void cond(int r, GateKind g, QubitId q, std::vector<int> bits) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::Cond;
        op.gate = g;
        op.qubits = {q};
        op.bits = std::move(bits);
        push(r, std::move(op));
    }

    void sync(int r) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::Sync;
        op.sync_id = next_sync_++;
        push(r, std::move(op));
        if (ledger_ >= 0) ++out_.ledger[ledger_].syncs;
    }

    QubitId new_comm(int r) { return QubitId::comm(r, state_[r].next_comm++); }

    std::pair<QubitId, QubitId> alloc_epr(int a, int b) {
        PrimitiveOp op;
        op.kind = PrimitiveOp::Kind::AllocEpr;
        QubitId e1 = new_comm(a);
        QubitId e2 = new_comm(b);
        op.qubits = {e1, e2};
        op.consumed = 2;
        push(a, std::move(op));
        if (ledger_ >= 0) out_.ledger[ledger_].comm_qubits += 2;
        return {e1, e2};
    }

    int open_ledger(const std::string &intrinsic, std::vector<int> ranks, const std::string &protocol) {
        out_.ledger.push_back(LedgerEntry{intrinsic, std::move(ranks), ideal_ ? "ideal" : protocol, 0, 0});
        ledger_ = static_cast<int>(out_.ledger.size()) - 1;
        return ledger_;
    }

    // ------------------------------------------------------------------
    // Protocol building blocks

    /// Teleports `src` (on `from`) to `to`. The state lands in a fresh comm
    /// qubit, then is swapped into `dst` when given.
    QubitId teleport(int from, QubitId src, int to, std::optional<QubitId> dst) {
        sync(from);
        auto [e1, e2] = alloc_epr(from, to);
        gate(from, GateKind::CNOT, {src, e1});
        gate(from, GateKind::H, {src});
        const int ma = measure(from, src);
        const int me = measure(from, e1);
        csend(from, to, {me, ma});
        reset(from, src);
        const auto bits = crecv(to, from, 2);
        cond(to, GateKind::X, e2, {bits[0]});
        cond(to, GateKind::Z, e2, {bits[1]});
        if (!dst) return e2;
        gate(to, GateKind::SWAP, {e2, *dst});
        reset(to, e2);
        return *dst;
    }

    /// Point-to-point state move honoring the topology.
    void move(int from, QubitId src, int to, QubitId dst) {
        if (ideal_) {
            csend(from, to, {});
            crecv(to, from, 0);
            gate(to, GateKind::SWAP, {src, dst});
            reset(to, src);
            csend(to, from, {});
            crecv(from, to, 0);
            return;
        }
        if (from == to) {
            gate(from, GateKind::SWAP, {src, dst});
            reset(from, src);
            return;
        }
        if (relay_ < 0) {
            teleport(from, src, to, dst);
            return;
        }
        const QubitId mid = teleport(from, src, relay_, std::nullopt);
        teleport(relay_, mid, to, dst);
    }

    QubitId cat_entangle(int from, QubitId control, int to) {
        sync(from);
        auto [e1, e2] = alloc_epr(from, to);
        gate(from, GateKind::CNOT, {control, e1});
        const int m = measure(from, e1);
        csend(from, to, {m});
        const auto bits = crecv(to, from, 1);
        cond(to, GateKind::X, e2, bits);
        return e2;
    }

    void cat_disentangle(int holder, QubitId ref, int owner, QubitId control) {
        sync(holder);
        gate(holder, GateKind::H, {ref});
        const int m = measure(holder, ref);
        csend(holder, owner, {m});
        const auto bits = crecv(owner, holder, 1);
        cond(owner, GateKind::Z, control, bits);
    }

    // ------------------------------------------------------------------
    // Shared references

    long region_end(int rank, size_t from, std::int64_t slot) const {
        const auto &ops = traces_[rank].ops;
        long last = static_cast<long>(from);
        for (size_t i = from + 1; i < ops.size(); ++i) {
            const auto &op = ops[i];
            if (op.kind == TraceOp::Kind::Finalize) break;
            if (contains(defined_addresses(op, rank), slot)) break;
            if (contains(used_addresses(op, rank), slot)) last = static_cast<long>(i);
        }
        return last;
    }

    ReferenceUsage usage_after(int rank, size_t from, std::int64_t slot) const {
        ReferenceUsage u;
        const auto &ops = traces_[rank].ops;
        for (size_t i = from + 1; i < ops.size(); ++i) {
            const auto &op = ops[i];
            if (op.kind == TraceOp::Kind::Finalize || contains(defined_addresses(op, rank), slot)) break;
            if (!contains(used_addresses(op, rank), slot)) continue;
            ++u.uses;
            if (!is_reference_use(op, slot)) u.all_commuting = false;
        }
        return u;
    }

    /// Starts sharing `owner`'s qubit at `addr` with every member, whose
    /// slot becomes an alias. Members are in communicator order.
    int open_group(GroupKind kind, int owner, std::int64_t addr, std::vector<Member> members, bool track_busy = true) {
        Group g;
        g.kind = kind;
        g.owner = owner;
        g.addr = addr;
        g.psi = QubitId::data(owner, addr);
        g.members = std::move(members);
        g.remaining = static_cast<int>(g.members.size());
        g.ledger = ledger_;
        g.track_busy = track_busy;
        groups_.push_back(std::move(g));
        const int id = static_cast<int>(groups_.size()) - 1;
        if (track_busy && groups_[id].remaining > 0) ++state_[owner].busy[addr];
        return id;
    }

    void add_alias(int rank, std::int64_t slot, QubitId target, bool ready, int group) {
        Alias a;
        a.target = target;
        a.ready = ready;
        a.group = group;
        a.end_index = region_end(rank, state_[rank].pc, slot);
        state_[rank].aliases[slot] = a;
    }

    /// Member `m` of group `gid` finished using its reference.
    void settle(int gid, size_t m) {
        const int saved = ledger_;
        ledger_ = groups_[gid].ledger;
        Group &g = groups_[gid];
        Member &mem = g.members[m];
        mem.settled = true;
        --g.remaining;
        switch (g.kind) {
            case GroupKind::Ideal:
                csend(mem.rank, g.owner, {});
                crecv(g.owner, mem.rank, 0);
                break;
            case GroupKind::TelegateDirect: cat_disentangle(mem.rank, mem.qubit, g.owner, g.psi); break;
            case GroupKind::TelegateRelay:
                cat_disentangle(mem.rank, mem.qubit, relay_, g.relay_qubit);
                if (g.remaining == 0) cat_disentangle(relay_, g.relay_qubit, g.owner, g.psi);
                break;
            case GroupKind::Ghz: {
                gate(mem.rank, GateKind::H, {mem.qubit});
                const int bit = measure(mem.rank, mem.qubit);
                csend(mem.rank, g.owner, {bit});
                const auto got = crecv(g.owner, mem.rank, 1);
                g.parity.push_back(got[0]);
                if (g.remaining == 0) {
                    sync(g.owner);
                    cond(g.owner, GateKind::Z, g.psi, g.parity);
                }
                break;
            }
            case GroupKind::TeledataDirect:
            case GroupKind::TeledataRelay: {
                const bool via_relay = g.kind == GroupKind::TeledataRelay;
                const int hub = via_relay ? relay_ : g.owner;
                QubitId held = via_relay ? teleport(mem.rank, mem.qubit, hub, std::nullopt)
                                         : teleport(mem.rank, mem.qubit, hub, g.psi);
                g.relay_qubit = held;
                ++g.chain;
                if (g.chain < g.members.size()) {
                    Member &next = g.members[g.chain];
                    next.qubit = teleport(hub, held, next.rank, std::nullopt);
                    Alias &a = state_[next.rank].aliases.at(next.slot);
                    a.target = next.qubit;
                    a.ready = true;
                    if (a.end_pending) {
                        ledger_ = saved;
                        end_alias(next.rank, next.slot);
                        return finish_group(gid, saved);
                    }
                } else if (via_relay) {
                    teleport(relay_, held, g.owner, g.psi);
                }
                break;
            }
        }
        finish_group(gid, saved);
    }

    void finish_group(int gid, int saved_ledger) {
        Group &g = groups_[gid];
        if (g.remaining == 0 && g.track_busy) {
            auto &busy = state_[g.owner].busy;
            if (--busy[g.addr] == 0) busy.erase(g.addr);
            g.track_busy = false;
        }
        ledger_ = saved_ledger;
    }

    void end_alias(int rank, std::int64_t slot) {
        auto it = state_[rank].aliases.find(slot);
        if (it == state_[rank].aliases.end()) return;
        const int gid = it->second.group;
        state_[rank].aliases.erase(it);
        for (size_t m = 0; m < groups_[gid].members.size(); ++m) {
            const Member &mem = groups_[gid].members[m];
            if (mem.rank == rank && mem.slot == slot && !mem.settled) {
                settle(gid, m);
                return;
            }
        }
    }

    /// Settles every alias of `rank` whose region ends at trace index `index`.
    void end_regions(int rank, size_t index) {
        std::vector<std::int64_t> ending;
        for (auto &[slot, a] : state_[rank].aliases) {
            if (a.end_index != static_cast<long>(index)) continue;
            if (a.ready) ending.push_back(slot);
            else a.end_pending = true;
        }
        for (auto slot : ending) end_alias(rank, slot);
    }

    // ------------------------------------------------------------------
    // Readiness

    QubitId resolve(int rank, std::int64_t addr) const {
        auto it = state_[rank].aliases.find(addr);
        if (it != state_[rank].aliases.end()) return it->second.target;
        return QubitId::data(rank, addr);
    }

    bool busy(int rank, std::int64_t addr) const { return state_[rank].busy.count(addr) > 0; }

    /// Whether `op` on `rank` may run now. Throws on an illegal use of a
    /// shared reference.
    bool can_run(int rank, const TraceOp &op) const {
        for (auto a : used_addresses(op, rank)) {
            if (busy(rank, a)) return false;
            auto it = state_[rank].aliases.find(a);
            if (it == state_[rank].aliases.end()) continue;
            if (!it->second.ready) return false;
            if (!is_reference_use(op, a)) {
                throw Error(ErrorCode::NonCommutingReference,
                            "rank " + std::to_string(rank) + " uses shared reference " + std::to_string(a) +
                                " in an operation that does not commute with its control" + where(op));
            }
        }
        for (auto a : defined_addresses(op, rank)) {
            if (busy(rank, a) || state_[rank].aliases.count(a)) return false;
        }
        return true;
    }

    // ------------------------------------------------------------------
    // Scheduling

    bool advance(int r) {
        bool progressed = false;
        auto &st = state_[r];
        const auto &ops = traces_[r].ops;
        while (!st.done) {
            if (st.pc >= ops.size()) {
                if (!st.busy.empty()) break;
                st.done = true;
                progressed = true;
                break;
            }
            const TraceOp &op = ops[st.pc];
            bool ran = false;
            switch (op.kind) {
                case TraceOp::Kind::Initialize: ran = true; break;
                case TraceOp::Kind::Finalize: ran = st.busy.empty() && st.aliases.empty(); break;
                case TraceOp::Kind::Gate:
                case TraceOp::Kind::Measure:
                case TraceOp::Kind::Reset:
                    if (!can_run(r, op)) break;
                    run_local(r, op);
                    ran = true;
                    break;
                case TraceOp::Kind::Comm:
                    if (op.cls.is_point_to_point()) {
                        if (op.cls.is_send()) ran = try_p2p(r);
                    } else {
                        ran = try_collective(r);
                    }
                    if (ran) continue;  // the event advanced every participant
                    break;
            }
            if (!ran) break;
            end_regions(r, st.pc);
            ++st.pc;
            progressed = true;
        }
        return progressed;
    }

    void run_local(int r, const TraceOp &op) {
        std::vector<QubitId> qs;
        for (auto a : op.qubits) qs.push_back(resolve(r, a));
        switch (op.kind) {
            case TraceOp::Kind::Gate: gate(r, op.gate, std::move(qs), op.theta); break;
            case TraceOp::Kind::Measure: measure(r, qs[0]); break;
            case TraceOp::Kind::Reset: reset(r, qs[0]); break;
            default: break;
        }
    }

    /// Finishes an event: regions ending at the event close, program
    /// counters advance.
    void complete(const std::vector<int> &ranks) {
        for (int p : ranks) {
            end_regions(p, state_[p].pc);
            ++state_[p].pc;
        }
    }

    int peer_of(const TraceOp &op) const {
        const int local = static_cast<int>(op.args[op.args.size() - 2]);
        try {
            return world_rank_of(op.comm, local);
        } catch (const Error &e) {
            throw Error(e.code(), e.message() + where(op));
        }
    }

    static std::int64_t element_count(const TraceOp &op) {
        return op.cls.array || op.cls.base == IntrinsicBase::MeasureRecv ? op.args[1] : 1;
    }

    bool try_p2p(int a) {
        const TraceOp &send = traces_[a].ops[state_[a].pc];
        const int b = peer_of(send);
        if (b == a) throw Error(ErrorCode::InvalidProgram, "rank " + std::to_string(a) + " sends to itself" + where(send));
        if (state_[b].done || state_[b].pc >= traces_[b].ops.size()) return false;
        const TraceOp &recv = traces_[b].ops[state_[b].pc];
        if (recv.kind != TraceOp::Kind::Comm || !recv.cls.is_recv() || peer_of(recv) != a) return false;
        const bool quantum = send.cls.base == IntrinsicBase::QSend;
        if ((recv.cls.base == IntrinsicBase::QRecv) != quantum || recv.cls.array != send.cls.array) {
            throw Error(ErrorCode::UnmatchedEndpoint, "rank " + std::to_string(a) + " " + send.callee + where(send) +
                                                          " meets " + recv.callee + where(recv) + " on rank " +
                                                          std::to_string(b));
        }
        const std::int64_t count = element_count(send);
        if (element_count(recv) != count) {
            throw Error(ErrorCode::UnmatchedEndpoint, "rank " + std::to_string(a) + " sends " + std::to_string(count) +
                                                          " elements but rank " + std::to_string(b) + " receives " +
                                                          std::to_string(element_count(recv)) + where(recv));
        }
        if (!can_run(a, send) || !can_run(b, recv)) return false;

        if (!quantum) {
            open_ledger(send.callee, {a, b}, "classical");
            std::vector<int> bits;
            for (auto q : used_addresses(send, a)) bits.push_back(measure(a, resolve(a, q)));
            sync(a);
            csend(a, b, bits);
            crecv(b, a, bits.size());
            complete({a, b});
            return true;
        }

        Protocol p;
        try {
            ReferenceUsage usage;
            for (auto slot : defined_addresses(recv, b)) {
                ReferenceUsage u = usage_after(b, state_[b].pc, slot);
                usage.uses += u.uses;
                usage.all_commuting = usage.all_commuting && u.all_commuting;
            }
            Protocol send_side = send.cls.protocol;
            Protocol recv_side = recv.cls.protocol;
            if (send_side == Protocol::Unspecified && recv_side == Protocol::Unspecified) send_side = opt_.default_protocol;
            p = resolve_protocol(send_side, recv_side, usage, topo_);
        } catch (const Error &e) {
            throw Error(e.code(), e.message() + " (" + send.callee + where(send) + ", " + recv.callee +
                                      where(recv) + ")");
        }
        open_ledger(send.callee, {a, b}, to_string(p));
        const auto srcs = used_addresses(send, a);
        const auto dsts = defined_addresses(recv, b);
        for (size_t k = 0; k < srcs.size(); ++k) {
            if (p == Protocol::Teledata) {
                move(a, QubitId::data(a, srcs[k]), b, QubitId::data(b, dsts[k]));
            } else {
                share(a, srcs[k], {{b, dsts[k]}}, ExposeMode::Telegate);
            }
        }
        complete({a, b});
        return true;
    }

    /// Shares owner's qubit with the given (rank, slot) members.
    void share(int owner, std::int64_t addr, const std::vector<std::pair<int, std::int64_t>> &targets, ExposeMode mode) {
        std::vector<Member> members;
        for (auto [rank, slot] : targets) members.push_back(Member{rank, slot, {}, false});
        if (members.empty()) return;
        const QubitId psi = QubitId::data(owner, addr);
        if (ideal_) {
            const int gid = open_group(GroupKind::Ideal, owner, addr, members);
            for (auto &m : groups_[gid].members) {
                csend(owner, m.rank, {});
                crecv(m.rank, owner, 0);
                m.qubit = psi;
                add_alias(m.rank, m.slot, psi, true, gid);
            }
            return;
        }
        switch (mode) {
            case ExposeMode::Telegate: {
                const bool via_relay = relay_ >= 0;
                const int gid = open_group(via_relay ? GroupKind::TelegateRelay : GroupKind::TelegateDirect, owner, addr, members);
                QubitId source = psi;
                int from = owner;
                if (via_relay) {
                    groups_[gid].relay_qubit = cat_entangle(owner, psi, relay_);
                    source = groups_[gid].relay_qubit;
                    from = relay_;
                }
                for (auto &m : groups_[gid].members) {
                    m.qubit = cat_entangle(from, source, m.rank);
                    add_alias(m.rank, m.slot, m.qubit, true, gid);
                }
                break;
            }
            case ExposeMode::Ghz: {
                const int gid = open_group(GroupKind::Ghz, owner, addr, members);
                auto &g = groups_[gid];
                const int k = static_cast<int>(g.members.size());
                sync(owner);
                PrimitiveOp alloc;
                alloc.kind = PrimitiveOp::Kind::AllocGhz;
                const QubitId root_share = new_comm(owner);
                alloc.qubits.push_back(root_share);
                for (auto &m : g.members) {
                    m.qubit = new_comm(m.rank);
                    alloc.qubits.push_back(m.qubit);
                }
                alloc.consumed = static_cast<int>(per_epoch_cost(Strategy::Expose, topo_.kind, k));
                if (ledger_ >= 0) out_.ledger[ledger_].comm_qubits += alloc.consumed;
                push(owner, std::move(alloc));
                gate(owner, GateKind::CNOT, {psi, root_share});
                const int bit = measure(owner, root_share);
                for (auto &m : g.members) csend(owner, m.rank, {bit});
                for (auto &m : g.members) {
                    const auto got = crecv(m.rank, owner, 1);
                    cond(m.rank, GateKind::X, m.qubit, got);
                    add_alias(m.rank, m.slot, m.qubit, true, gid);
                }
                break;
            }
            case ExposeMode::Teledata: {
                const bool via_relay = relay_ >= 0;
                const int gid = open_group(via_relay ? GroupKind::TeledataRelay : GroupKind::TeledataDirect, owner, addr, members);
                auto &g = groups_[gid];
                for (auto &m : g.members) add_alias(m.rank, m.slot, QubitId{}, false, gid);
                QubitId held = psi;
                int hub = owner;
                if (via_relay) {
                    held = teleport(owner, psi, relay_, std::nullopt);
                    hub = relay_;
                }
                Member &first = groups_[gid].members[0];
                first.qubit = teleport(hub, held, first.rank, std::nullopt);
                Alias &a = state_[first.rank].aliases.at(first.slot);
                a.target = first.qubit;
                a.ready = true;
                break;
            }
        }
    }

    struct CollectiveShape {
        int root_local = 0;
        int root = 0;
        std::int64_t sendcount = 0;
        std::int64_t recvcount = 0;
    };

    bool compatible(const TraceOp &x, const TraceOp &y) const {
        if (x.cls.base != y.cls.base || x.cls.array != y.cls.array) return false;
        const int ra = root_arg(x);
        if (x.args[ra] != y.args[ra]) return false;
        if (x.cls.base == IntrinsicBase::Expose) return !x.cls.array || x.args[1] == y.args[1];
        return x.args[1] == y.args[1] && x.args[3] == y.args[3] && x.fold == y.fold;
    }

    bool try_collective(int r) {
        const TraceOp &mine = traces_[r].ops[state_[r].pc];
        const auto &members = mine.comm.members;
        std::vector<const TraceOp *> ops;
        for (int m : members) {
            if (state_[m].done || state_[m].pc >= traces_[m].ops.size()) return false;
            const TraceOp &o = traces_[m].ops[state_[m].pc];
            if (o.kind != TraceOp::Kind::Comm || !o.cls.is_collective() || !(o.comm == mine.comm)) return false;
            if (!compatible(mine, o)) {
                throw Error(ErrorCode::CollectiveMismatch, "rank " + std::to_string(r) + " is at " + mine.callee + where(mine) +
                                                               " while rank " + std::to_string(m) + " is at " + o.callee +
                                                               where(o));
            }
            ops.push_back(&o);
        }
        const int root_local = static_cast<int>(mine.args[root_arg(mine)]);
        if (root_local < 0 || root_local >= static_cast<int>(members.size())) {
            throw Error(ErrorCode::RootOutOfRange, "root " + std::to_string(root_local) + " is not a rank of a communicator of size " +
                                                       std::to_string(members.size()) + where(mine));
        }
        for (size_t i = 0; i < members.size(); ++i) {
            if (!can_run(members[i], *ops[i])) return false;
        }
        const int root = members[root_local];

        if (mine.cls.base == IntrinsicBase::Expose) {
            open_ledger(mine.callee, members, ideal_ ? "ideal" : to_string(opt_.expose));
            const auto &root_op = *ops[root_local];
            const auto elems = used_addresses(root_op, root);
            for (size_t e = 0; e < elems.size(); ++e) {
                std::vector<std::pair<int, std::int64_t>> targets;
                for (size_t i = 0; i < members.size(); ++i) {
                    if (static_cast<int>(i) == root_local) continue;
                    targets.push_back({members[i], defined_addresses(*ops[i], members[i])[e]});
                }
                share(root, elems[e], targets, opt_.expose);
            }
            complete(members);
            return true;
        }

        Protocol p = Protocol::Unspecified;
        for (size_t i = 0; i < members.size(); ++i) {
            const Protocol q = ops[i]->cls.protocol;
            if (q == Protocol::Unspecified) continue;
            if (p != Protocol::Unspecified && p != q) {
                throw Error(ErrorCode::ProtocolMismatch, "members of " + mine.callee + where(mine) + " disagree on the protocol");
            }
            p = q;
        }
        if (p == Protocol::Unspecified) p = opt_.default_protocol;
        if (p == Protocol::Unspecified) p = Protocol::Teledata;

        const std::int64_t size = static_cast<std::int64_t>(members.size());
        const std::int64_t sendcount = mine.args[1];
        const std::int64_t recvcount = mine.args[3];
        open_ledger(mine.callee, members, to_string(p));
        if (mine.cls.base == IntrinsicBase::Scatter) {
            if (recvcount <= 0 || sendcount != recvcount * size) {
                throw Error(ErrorCode::IndivisibleCount, "scatter of " + std::to_string(sendcount) + " qubits over " +
                                                             std::to_string(size) + " ranks with recvcount " +
                                                             std::to_string(recvcount) + where(mine));
            }
            const auto &src = ops[root_local]->args;
            for (std::int64_t i = 0; i < size; ++i) {
                const int m = members[i];
                const std::int64_t dst_base = ops[i]->args[2];
                for (std::int64_t t = 0; t < recvcount; ++t) {
                    const std::int64_t from_addr = src[0] + i * recvcount + t;
                    const std::int64_t to_addr = dst_base + t;
                    if (m == root) {
                        if (from_addr != to_addr) {
                            gate(root, GateKind::SWAP, {QubitId::data(root, from_addr), QubitId::data(root, to_addr)});
                        }
                    } else if (p == Protocol::Teledata) {
                        move(root, QubitId::data(root, from_addr), m, QubitId::data(m, to_addr));
                    } else {
                        share(root, from_addr, {{m, to_addr}}, ExposeMode::Telegate);
                    }
                }
            }
            complete(members);
            return true;
        }

        // Gather and reduce.
        if (sendcount <= 0 || recvcount != sendcount * size) {
            throw Error(ErrorCode::IndivisibleCount, mine.callee + " of " + std::to_string(sendcount) + " qubits from " +
                                                         std::to_string(size) + " ranks into recvcount " +
                                                         std::to_string(recvcount) + where(mine));
        }
        const bool reduce = mine.cls.base == IntrinsicBase::Reduce;
        const std::int64_t dst_base = ops[root_local]->args[2];
        for (std::int64_t i = 0; i < size; ++i) {
            const int m = members[i];
            const std::int64_t src_base = ops[i]->args[0];
            for (std::int64_t t = 0; t < sendcount; ++t) {
                const std::int64_t from_addr = src_base + t;
                const std::int64_t to_addr = dst_base + i * sendcount + t;
                if (m == root) {
                    if (from_addr != to_addr) {
                        gate(root, GateKind::SWAP, {QubitId::data(root, from_addr), QubitId::data(root, to_addr)});
                    }
                } else if (p == Protocol::Teledata) {
                    move(m, QubitId::data(m, from_addr), root, QubitId::data(root, to_addr));
                } else if (!reduce) {
                    share(m, from_addr, {{root, to_addr}}, ExposeMode::Telegate);
                }
            }
        }
        if (reduce) {
            for (std::int64_t t = 0; t < sendcount; ++t) {
                const QubitId acc = QubitId::data(root, dst_base + root_local * sendcount + t);
                for (std::int64_t i = 0; i < size; ++i) {
                    if (i == root_local) continue;
                    if (p == Protocol::Teledata) {
                        gate(root, mine.fold, {QubitId::data(root, dst_base + i * sendcount + t), acc});
                    } else {
                        fold_by_reference(members[i], ops[i]->args[0] + t, root, acc, mine.fold);
                    }
                }
            }
        }
        complete(members);
        return true;
    }

    /// Telegate reduce step: the contribution of `member` acts on the
    /// accumulator through a reference that is retired immediately.
    void fold_by_reference(int member, std::int64_t addr, int root, QubitId acc, GateKind fold) {
        const QubitId psi = QubitId::data(member, addr);
        if (ideal_) {
            csend(member, root, {});
            crecv(root, member, 0);
            gate(root, fold, {psi, acc});
            csend(root, member, {});
            crecv(member, root, 0);
            return;
        }
        if (relay_ < 0) {
            const QubitId ref = cat_entangle(member, psi, root);
            gate(root, fold, {ref, acc});
            cat_disentangle(root, ref, member, psi);
            return;
        }
        const QubitId mid = cat_entangle(member, psi, relay_);
        const QubitId ref = cat_entangle(relay_, mid, root);
        gate(root, fold, {ref, acc});
        cat_disentangle(root, ref, relay_, mid);
        cat_disentangle(relay_, mid, member, psi);
    }

    // ------------------------------------------------------------------
    // Unmatched endpoints

    bool unilateral() {
        if (!opt_.allow_unmatched) return false;
        for (int r = 0; r < world_; ++r) {
            auto &st = state_[r];
            if (st.done || st.pc >= traces_[r].ops.size()) continue;
            const TraceOp &op = traces_[r].ops[st.pc];
            if (op.kind != TraceOp::Kind::Comm || !op.cls.is_point_to_point()) continue;
            const int peer = peer_of(op);
            open_ledger(op.callee, {r, peer}, "unmatched");
            const std::int64_t n = element_count(op);
            Protocol p = op.cls.protocol == Protocol::Unspecified ? opt_.default_protocol : op.cls.protocol;
            if (p == Protocol::Unspecified) p = Protocol::Teledata;
            if (op.cls.base == IntrinsicBase::QSend && !ideal_) {
                for (auto a : used_addresses(op, r)) {
                    const QubitId q = resolve(r, a);
                    sync(r);
                    auto [e1, e2] = alloc_epr(r, peer);
                    (void)e2;
                    gate(r, GateKind::CNOT, {q, e1});
                    std::vector<int> bits;
                    if (p == Protocol::Teledata) {
                        gate(r, GateKind::H, {q});
                        bits.push_back(measure(r, e1));
                        bits.push_back(measure(r, q));
                        csend(r, peer, bits);
                        reset(r, q);
                    } else {
                        csend(r, peer, {measure(r, e1)});
                    }
                }
            } else if (op.cls.base == IntrinsicBase::MeasureSend) {
                std::vector<int> bits;
                for (auto a : used_addresses(op, r)) bits.push_back(measure(r, resolve(r, a)));
                sync(r);
                csend(r, peer, bits);
            } else if (op.cls.base == IntrinsicBase::QSend) {
                csend(r, peer, {});
            } else {
                const size_t per = ideal_ ? 0 : (p == Protocol::Teledata ? 2 : 1);
                crecv(r, peer, op.cls.base == IntrinsicBase::MeasureRecv ? static_cast<size_t>(n) : per * n);
            }
            ++st.pc;
            return true;
        }
        return false;
    }

    [[noreturn]] void stuck() const {
        // A rank waiting behind an illegal use of a shared reference is the real cause.
        for (int r = 0; r < world_; ++r) {
            const auto &st = state_[r];
            if (!st.done && st.pc < traces_[r].ops.size()) (void)can_run(r, traces_[r].ops[st.pc]);
        }
        for (int r = 0; r < world_; ++r) {
            const auto &st = state_[r];
            if (st.done || st.pc >= traces_[r].ops.size()) continue;
            const TraceOp &op = traces_[r].ops[st.pc];
            if (op.kind != TraceOp::Kind::Comm) continue;
            std::string msg = "rank " + std::to_string(r) + ": " + op.callee + where(op) + " has no matching ";
            if (op.cls.is_send()) msg += "receive on rank " + std::to_string(peer_of(op));
            else if (op.cls.is_recv()) msg += "send from rank " + std::to_string(peer_of(op));
            else msg += "call on every member of its communicator";
            throw Error(ErrorCode::UnmatchedEndpoint, msg);
        }
        std::string blocked;
        for (int r = 0; r < world_; ++r) {
            if (!state_[r].done) blocked += (blocked.empty() ? "" : ", ") + std::to_string(r);
        }
        throw Error(ErrorCode::UnmatchedEndpoint, "ranks " + blocked + " wait on shared qubits that are never released");
    }
};

}  // namespace

LoweredProgram lower(const std::vector<RankTrace> &traces, const Topology &topology, const LoweringOptions &options) {
    return Lowerer(traces, topology, options, false).run();
}

LoweredProgram lower(const Program &program, const Topology &topology, const LoweringOptions &options) {
    if (topology.qpus < 1) throw Error(ErrorCode::RankOutOfRange, "topology has no QPUs");
    return lower(trace(program, topology.qpus), topology, options);
}

LoweredProgram lower_ideal(const Program &program, int world_size, const LoweringOptions &options) {
    return Lowerer(trace(program, world_size), Topology::direct(world_size), options, true).run();
}

}  // namespace netqir
