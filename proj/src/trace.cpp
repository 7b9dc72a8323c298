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

#include "netqir/trace.hpp"

#include <algorithm>
#include <map>

#include "netqir/validate.hpp"

namespace netqir {

namespace {

constexpr long kStepLimit = 1'000'000;
constexpr int kCallDepthLimit = 64;

struct RtValue {
    enum class Kind { Int, Comm, Group, None };
    Kind kind = Kind::None;
    std::int64_t i = 0;
    CommHandle comm;
    GroupHandle group;
};

std::string where(const SourceLoc &loc) { return loc.line ? " at " + to_string(loc) : ""; }

class Interpreter {
  public:
    Interpreter(const Program &p, int world_size, int rank) : program_(p), world_size_(world_size), rank_(rank) {}

    std::vector<TraceOp> run(const Function &entry) {
        call_function(entry, {}, 0);
        return std::move(ops_);
    }

  private:
    const Program &program_;
    int world_size_;
    int rank_;
    long steps_ = 0;
    std::vector<TraceOp> ops_;

    using Frame = std::map<std::string, RtValue>;

    RtValue eval(const Value &v, const Frame &frame) const {
        RtValue out;
        switch (v.kind) {
            case Value::Kind::Int:
            case Value::Kind::Address:
                out.kind = RtValue::Kind::Int;
                out.i = v.int_value;
                return out;
            case Value::Kind::Float: return out;
            case Value::Kind::Local: {
                auto it = frame.find(v.name);
                if (it == frame.end()) throw Error(ErrorCode::InvalidProgram, "%" + v.name + " has no value" + where(v.loc));
                return it->second;
            }
        }
        return out;
    }

    std::int64_t eval_int(const Value &v, const Frame &frame, const SourceLoc &loc) const {
        RtValue r = eval(v, frame);
        if (r.kind != RtValue::Kind::Int) {
            throw Error(ErrorCode::UnsupportedProgram, "operand cannot be folded to a constant" + where(loc));
        }
        return r.i;
    }

    RtValue call_function(const Function &f, const std::vector<RtValue> &args, int depth) {
        if (depth > kCallDepthLimit) throw Error(ErrorCode::UnsupportedProgram, "call depth limit exceeded in @" + f.name);
        Frame frame;
        for (size_t i = 0; i < f.params.size() && i < args.size(); ++i) frame[f.params[i].name] = args[i];
        std::map<std::string, const BasicBlock *> labels;
        for (const auto &b : f.blocks) labels[b.label] = &b;
        const BasicBlock *block = &f.blocks.front();
        while (true) {
            for (const auto &inst : block->instructions) {
                if (++steps_ > kStepLimit) {
                    throw Error(ErrorCode::UnsupportedProgram, "rank " + std::to_string(rank_) + " exceeded the step limit");
                }
                switch (inst.opcode) {
                    case Opcode::Call: {
                        RtValue r = do_call(inst, frame, depth);
                        if (inst.result) frame[*inst.result] = r;
                        break;
                    }
                    case Opcode::ICmp: {
                        const auto a = eval_int(inst.operands[0], frame, inst.loc);
                        const auto b = eval_int(inst.operands[1], frame, inst.loc);
                        bool v = inst.pred == ICmpPred::Eq ? a == b : inst.pred == ICmpPred::Ne ? a != b : a < b;
                        frame[*inst.result] = RtValue{RtValue::Kind::Int, v ? 1 : 0, {}, {}};
                        break;
                    }
                    case Opcode::Add:
                    case Opcode::Sub: {
                        const auto a = eval_int(inst.operands[0], frame, inst.loc);
                        const auto b = eval_int(inst.operands[1], frame, inst.loc);
                        frame[*inst.result] = RtValue{RtValue::Kind::Int, inst.opcode == Opcode::Add ? a + b : a - b, {}, {}};
                        break;
                    }
                    case Opcode::Br: block = labels.at(inst.targets[0]); goto next_block;
                    case Opcode::CondBr: {
                        const bool c = eval_int(inst.operands[0], frame, inst.loc) != 0;
                        block = labels.at(inst.targets[c ? 0 : 1]);
                        goto next_block;
                    }
                    case Opcode::Ret:
                        if (!inst.operands.empty()) return eval(inst.operands[0], frame);
                        return RtValue{};
                }
            }
            throw Error(ErrorCode::InvalidProgram, "block %" + block->label + " falls through");
        next_block:;
        }
    }

    RtValue do_call(const Instruction &inst, const Frame &frame, int depth) {
        if (auto g = gate_from_symbol(inst.callee)) {
            TraceOp op;
            op.kind = TraceOp::Kind::Gate;
            op.gate = *g;
            op.loc = inst.loc;
            size_t k = 0;
            if (gate_is_parametric(*g)) {
                const Value &t = inst.operands[k++];
                if (t.kind != Value::Kind::Float) throw Error(ErrorCode::UnsupportedProgram, "gate angle must be a literal" + where(inst.loc));
                op.theta = t.float_value;
            }
            for (; k < inst.operands.size(); ++k) op.qubits.push_back(eval_int(inst.operands[k], frame, inst.loc));
            ops_.push_back(std::move(op));
            return {};
        }
        if (inst.callee == kMeasureSymbol || inst.callee == kResetSymbol) {
            TraceOp op;
            op.kind = inst.callee == kMeasureSymbol ? TraceOp::Kind::Measure : TraceOp::Kind::Reset;
            op.loc = inst.loc;
            op.qubits.push_back(eval_int(inst.operands[0], frame, inst.loc));
            if (op.kind == TraceOp::Kind::Measure) op.result = eval_int(inst.operands[1], frame, inst.loc);
            ops_.push_back(std::move(op));
            return {};
        }
        if (!is_netqir_symbol(inst.callee)) {
            const Function *f = program_.find(inst.callee);
            if (!f || f->is_declaration) {
                throw Error(ErrorCode::UnsupportedProgram, "call to external function @" + inst.callee + where(inst.loc));
            }
            std::vector<RtValue> args;
            for (const auto &v : inst.operands) args.push_back(eval(v, frame));
            return call_function(*f, args, depth + 1);
        }

        const IntrinsicClassification cls = classify(inst.callee);
        auto comm_arg = [&](size_t idx) -> CommHandle {
            RtValue v = eval(inst.operands.at(idx), frame);
            if (v.kind != RtValue::Kind::Comm) throw Error(ErrorCode::InvalidProgram, "expected a communicator" + where(inst.loc));
            return v.comm;
        };
        RtValue out;
        switch (cls.base) {
            case IntrinsicBase::Initialize:
            case IntrinsicBase::Finalize: {
                TraceOp op;
                op.kind = cls.base == IntrinsicBase::Initialize ? TraceOp::Kind::Initialize : TraceOp::Kind::Finalize;
                op.loc = inst.loc;
                ops_.push_back(std::move(op));
                return out;
            }
            case IntrinsicBase::CommWorld:
                out.kind = RtValue::Kind::Comm;
                out.comm = comm_world(world_size_);
                return out;
            case IntrinsicBase::CommRank:
                out.kind = RtValue::Kind::Int;
                try {
                    out.i = comm_rank(comm_arg(0), Rank{rank_});
                } catch (const Error &e) {
                    throw Error(e.code(), e.message() + where(inst.loc));
                }
                return out;
            case IntrinsicBase::CommSize:
                out.kind = RtValue::Kind::Int;
                out.i = comm_size(comm_arg(0));
                return out;
            case IntrinsicBase::GroupFromRanks: {
                std::vector<int> ranks;
                for (size_t k = 1; k < inst.operands.size(); ++k) ranks.push_back(static_cast<int>(eval_int(inst.operands[k], frame, inst.loc)));
                const auto count = eval_int(inst.operands[0], frame, inst.loc);
                if (count != static_cast<std::int64_t>(ranks.size())) {
                    throw Error(ErrorCode::InvalidProgram, "group_from_ranks count does not match the rank list" + where(inst.loc));
                }
                out.kind = RtValue::Kind::Group;
                out.group = group_from_ranks(ranks, world_size_);
                return out;
            }
            case IntrinsicBase::CommFromGroup: {
                RtValue g = eval(inst.operands.at(0), frame);
                if (g.kind != RtValue::Kind::Group) throw Error(ErrorCode::InvalidProgram, "expected a group" + where(inst.loc));
                out.kind = RtValue::Kind::Comm;
                out.comm = comm_from_group(g.group);
                return out;
            }
            default: break;
        }

        const Signature sig = signature_of(inst.callee);
        TraceOp op;
        op.kind = TraceOp::Kind::Comm;
        op.callee = inst.callee;
        op.cls = cls;
        op.loc = inst.loc;
        if (inst.fold) op.fold = *fold_gate_from_name(*inst.fold);
        for (size_t k = 0; k < sig.params.size(); ++k) {
            if (sig.params[k] == ParamKind::Comm) {
                op.comm = comm_arg(k);
                op.args.push_back(0);
            } else {
                op.args.push_back(eval_int(inst.operands[k], frame, inst.loc));
            }
        }
        if (!op.comm.contains(rank_)) {
            throw Error(ErrorCode::NotAMember, "rank " + std::to_string(rank_) + " calls @" + inst.callee +
                                                   " on a communicator it does not belong to" + where(inst.loc));
        }
        ops_.push_back(std::move(op));
        return out;
    }
};

}  // namespace

std::vector<RankTrace> trace(const Program &program, int world_size) {
    const auto diags = validate(program);
    for (const auto &d : diags) {
        if (d.severity == Severity::Error) throw Error(ErrorCode::InvalidProgram, to_string(d));
    }
    if (world_size < 1) throw Error(ErrorCode::RankOutOfRange, "world size must be positive");
    const Function *entry = program.entry();
    std::vector<RankTrace> out;
    for (int r = 0; r < world_size; ++r) {
        Interpreter interp(program, world_size, r);
        out.push_back(RankTrace{r, interp.run(*entry)});
    }
    return out;
}

int infer_world_size(const Program &program) {
    std::int64_t highest = 1;
    for (const auto &f : program.functions) {
        for (const auto &b : f.blocks) {
            for (const auto &inst : b.instructions) {
                if (inst.opcode == Opcode::ICmp) {
                    for (const auto &v : inst.operands) {
                        if (v.kind == Value::Kind::Int) highest = std::max(highest, v.int_value);
                    }
                }
                if (inst.opcode != Opcode::Call || !is_netqir_symbol(inst.callee)) continue;
                IntrinsicClassification c;
                try {
                    c = classify(inst.callee);
                } catch (const Error &) {
                    continue;
                }
                if (c.base == IntrinsicBase::GroupFromRanks) {
                    for (size_t k = 1; k < inst.operands.size(); ++k) {
                        if (inst.operands[k].kind == Value::Kind::Int) highest = std::max(highest, inst.operands[k].int_value);
                    }
                } else if (c.is_collective() && c.base != IntrinsicBase::Expose && inst.operands.size() == 6) {
                    // A collective over n ranks moves sendcount = n * recvcount (scatter) or the reverse.
                    const Value &send = inst.operands[1];
                    const Value &recv = inst.operands[3];
                    if (send.kind != Value::Kind::Int || recv.kind != Value::Kind::Int) continue;
                    const std::int64_t whole = c.base == IntrinsicBase::Scatter ? send.int_value : recv.int_value;
                    const std::int64_t part = c.base == IntrinsicBase::Scatter ? recv.int_value : send.int_value;
                    if (part > 0 && whole % part == 0) highest = std::max(highest, whole / part - 1);
                } else if (c.is_point_to_point() && inst.operands.size() >= 2) {
                    const Value &peer = inst.operands[inst.operands.size() - 2];
                    if (peer.kind == Value::Kind::Int) highest = std::max(highest, peer.int_value);
                }
            }
        }
    }
    return static_cast<int>(highest + 1);
}

}  // namespace netqir
