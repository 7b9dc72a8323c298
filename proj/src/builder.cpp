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

#include "netqir/builder.hpp"

#include <map>
#include <set>

#include "netqir/parser.hpp"

namespace netqir {

namespace {

Arg::Kind arg_kind_of(ParamKind k) {
    switch (k) {
        case ParamKind::Qubit: return Arg::Kind::Qubit;
        case ParamKind::QubitSlot: return Arg::Kind::QubitSlot;
        case ParamKind::Array: return Arg::Kind::Array;
        case ParamKind::ArraySlot: return Arg::Kind::ArraySlot;
        case ParamKind::BitBuffer: return Arg::Kind::Bits;
        case ParamKind::Int32: return Arg::Kind::Int;
        case ParamKind::Comm: return Arg::Kind::Comm;
        case ParamKind::Group: return Arg::Kind::Group;
    }
    return Arg::Kind::Int;
}

std::string with_protocol(const std::string &base, Protocol p) {
    switch (p) {
        case Protocol::Teledata: return base + "_teledata";
        case Protocol::Telegate: return base + "_telegate";
        case Protocol::Unspecified: break;
    }
    return base;
}

bool ends_with_finalize(const Scope &scope) {
    if (scope.operations().empty()) return false;
    const auto *op = std::get_if<IntrinsicOperation>(&scope.operations().back());
    return op && op->name == std::string(kNetqirPrefix) + "finalize";
}

}  // namespace

Scope &Scope::h(QubitRef q) {
    ops_.push_back(GateOperation{GateKind::H, {q}, 0.0});
    return *this;
}

Scope &Scope::x(QubitRef q) {
    ops_.push_back(GateOperation{GateKind::X, {q}, 0.0});
    return *this;
}

Scope &Scope::z(QubitRef q) {
    ops_.push_back(GateOperation{GateKind::Z, {q}, 0.0});
    return *this;
}

Scope &Scope::cnot(QubitRef control, QubitRef target) {
    ops_.push_back(GateOperation{GateKind::CNOT, {control, target}, 0.0});
    return *this;
}

Scope &Scope::cz(QubitRef a, QubitRef b) {
    ops_.push_back(GateOperation{GateKind::CZ, {a, b}, 0.0});
    return *this;
}

Scope &Scope::cp(double theta, QubitRef a, QubitRef b) {
    ops_.push_back(GateOperation{GateKind::CP, {a, b}, theta});
    return *this;
}

Scope &Scope::measure(QubitRef q, std::int64_t result) {
    ops_.push_back(MeasureOperation{q, result});
    return *this;
}

Scope &Scope::reset(QubitRef q) {
    ops_.push_back(ResetOperation{q});
    return *this;
}

Scope &Scope::call(const std::string &intrinsic, std::vector<Arg> args, std::optional<std::string> fold) {
    const Signature sig = signature_of(intrinsic);
    bool ok = sig.variadic_int32 ? args.size() >= sig.params.size() : args.size() == sig.params.size();
    for (size_t i = 0; ok && i < args.size(); ++i) {
        const Arg::Kind expected = i < sig.params.size() ? arg_kind_of(sig.params[i]) : Arg::Kind::Int;
        ok = args[i].kind == expected;
    }
    if (!ok) throw Error(ErrorCode::InvalidProgram, "arguments do not match the signature of " + intrinsic);
    const auto c = classify(intrinsic);
    if (fold && c.base != IntrinsicBase::Reduce) throw Error(ErrorCode::InvalidProgram, "fold is only valid on reduce");
    if (fold && !fold_gate_from_name(*fold)) throw Error(ErrorCode::InvalidProgram, "unsupported fold gate " + *fold);
    IntrinsicOperation op{intrinsic, std::move(args), std::move(fold), -1, -1};
    if (c.base == IntrinsicBase::GroupFromRanks) op.defines_group = owner_->next_group_++;
    if (c.base == IntrinsicBase::CommFromGroup) op.defines_comm = owner_->next_comm_++;
    ops_.push_back(std::move(op));
    return *this;
}

Scope &Scope::qsend(QubitRef q, int dest, CommRef comm, Protocol p) {
    return call(with_protocol("__netqir__qsend", p), {Arg::qubit(q), Arg::integer(dest), Arg::comm(comm)});
}

Scope &Scope::qrecv(QubitRef slot, int source, CommRef comm, Protocol p) {
    return call(with_protocol("__netqir__qrecv", p), {Arg::qubit_slot(slot), Arg::integer(source), Arg::comm(comm)});
}

Scope &Scope::qsend_array(QubitArrayRef a, int dest, CommRef comm, Protocol p) {
    return call(with_protocol("__netqir__qsend_array", p),
                {Arg::array(a), Arg::integer(a.length), Arg::integer(dest), Arg::comm(comm)});
}

Scope &Scope::qrecv_array(QubitArrayRef slot, int source, CommRef comm, Protocol p) {
    return call(with_protocol("__netqir__qrecv_array", p),
                {Arg::array_slot(slot), Arg::integer(slot.length), Arg::integer(source), Arg::comm(comm)});
}

Scope &Scope::measure_send(QubitRef q, int dest, CommRef comm) {
    return call("__netqir__measure_send", {Arg::qubit(q), Arg::integer(dest), Arg::comm(comm)});
}

Scope &Scope::measure_recv(BitsRef bits, int count, int source, CommRef comm) {
    return call("__netqir__measure_recv", {Arg::bits(bits), Arg::integer(count), Arg::integer(source), Arg::comm(comm)});
}

Scope &Scope::expose(QubitRef q, int root, CommRef comm) {
    return call("__netqir__expose", {Arg::qubit(q), Arg::integer(root), Arg::comm(comm)});
}

Scope &Scope::expose_array(QubitArrayRef a, int root, CommRef comm) {
    return call("__netqir__expose_array", {Arg::array(a), Arg::integer(a.length), Arg::integer(root), Arg::comm(comm)});
}

Scope &Scope::scatter(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                      Protocol p) {
    return call(with_protocol("__netqir__scatter", p), {Arg::array(send), Arg::integer(sendcount), Arg::array(recv),
                                                         Arg::integer(recvcount), Arg::integer(root), Arg::comm(comm)});
}

Scope &Scope::gather(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                     Protocol p) {
    return call(with_protocol("__netqir__gather", p), {Arg::array(send), Arg::integer(sendcount), Arg::array(recv),
                                                        Arg::integer(recvcount), Arg::integer(root), Arg::comm(comm)});
}

Scope &Scope::reduce(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                     Protocol p, std::optional<std::string> fold) {
    return call(with_protocol("__netqir__reduce", p),
                {Arg::array(send), Arg::integer(sendcount), Arg::array(recv), Arg::integer(recvcount), Arg::integer(root),
                 Arg::comm(comm)},
                std::move(fold));
}

CommRef Scope::comm_from_ranks(const std::vector<int> &world_ranks) {
    std::vector<Arg> args{Arg::integer(static_cast<std::int64_t>(world_ranks.size()))};
    for (int r : world_ranks) args.push_back(Arg::integer(r));
    call("__netqir__group_from_ranks", std::move(args));
    const int group = std::get<IntrinsicOperation>(ops_.back()).defines_group;
    call("__netqir__comm_from_group", {Arg::group(GroupRef{group})});
    return CommRef{std::get<IntrinsicOperation>(ops_.back()).defines_comm};
}

RankConditionalOperation &Scope::if_rank(CommRef comm, int rank) {
    RankConditionalOperation op;
    op.comm = comm;
    op.rank = rank;
    op.then_scope = std::make_unique<Scope>(owner_, this);
    op.else_scope = std::make_unique<Scope>(owner_, this);
    ops_.push_back(std::move(op));
    return std::get<RankConditionalOperation>(ops_.back());
}

Scope &Scope::finalize() { return call("__netqir__finalize", {}); }

ProgramBuilder::ProgramBuilder() : main_(std::make_unique<Scope>(this, nullptr)) {
    main_->call("__netqir__initialize", {});
}

std::unique_ptr<ProgramBuilder> new_program() { return std::make_unique<ProgramBuilder>(); }

Scope &rank_conditional(Scope &scope, CommRef comm, int rank_value) { return *scope.if_rank(comm, rank_value).then_scope; }

// ---------------------------------------------------------------------------
// Executors

void PrinterExecutor::opaque_type(const std::string &name) { text_ += "%" + name + " = type opaque\n"; }

void PrinterExecutor::begin_function(const Function &header) {
    text_ += "\n" + print_signature(header) + " {\n";
    any_function_ = true;
    last_was_declaration_ = false;
}

void PrinterExecutor::label(const std::string &name) { text_ += name + ":\n"; }

void PrinterExecutor::instruction(const Instruction &inst) { text_ += print_instruction(inst); }

void PrinterExecutor::end_function() { text_ += "}\n"; }

void PrinterExecutor::declaration(const Function &decl) {
    if (!last_was_declaration_) text_ += "\n";
    text_ += print_signature(decl) + "\n";
    last_was_declaration_ = true;
}

void PrinterExecutor::finish() { text_ += "\nattributes #0 = { \"entry_point\" }\n"; }

void ProgramExecutor::opaque_type(const std::string &name) { program_.opaque_types.push_back(name); }

void ProgramExecutor::begin_function(const Function &header) { current_ = header; }

void ProgramExecutor::label(const std::string &name) { current_.blocks.push_back(BasicBlock{name, {}, {}}); }

void ProgramExecutor::instruction(const Instruction &inst) { current_.blocks.back().instructions.push_back(inst); }

void ProgramExecutor::end_function() { program_.functions.push_back(std::move(current_)); }

void ProgramExecutor::declaration(const Function &decl) { program_.functions.push_back(decl); }

// ---------------------------------------------------------------------------
// The walk

namespace {

class Walker {
  public:
    explicit Walker(Executor &ex) : ex_(ex) {}

    void run(const Scope &main) {
        collect_types(main);
        for (BaseType t : {BaseType::Qubit, BaseType::Array, BaseType::Comm, BaseType::Group, BaseType::Result}) {
            if (used_types_.count(t)) ex_.opaque_type(opaque_name(t));
        }
        Function entry;
        entry.name = "main";
        entry.return_type = Type::void_();
        entry.entry_point = true;
        ex_.begin_function(entry);
        ex_.label("entry");
        walk(main, true);
        Instruction ret;
        ret.opcode = Opcode::Ret;
        ret.type = Type::void_();
        ex_.instruction(ret);
        ex_.end_function();
        for (const auto &name : declared_order_) ex_.declaration(declaration_of(name));
        ex_.finish();
    }

  private:
    Executor &ex_;
    std::set<BaseType> used_types_;
    std::vector<std::string> declared_order_;
    std::set<std::string> declared_;
    int next_value_ = 0;
    int next_block_ = 0;

    void note_callee(const std::string &name) {
        if (declared_.insert(name).second) declared_order_.push_back(name);
    }

    static Function declaration_of(const std::string &name) {
        Function f;
        f.name = name;
        f.is_declaration = true;
        if (is_netqir_symbol(name)) {
            const Signature sig = signature_of(name);
            for (ParamKind k : sig.params) f.params.push_back(Param{type_of(k), ""});
            f.return_type = sig.return_type;
            f.variadic = sig.variadic_int32;
            return f;
        }
        f.return_type = Type::void_();
        const Type qubit = Type::ptr(BaseType::Qubit);
        if (name == kMeasureSymbol) {
            f.params = {Param{qubit, ""}, Param{Type::ptr(BaseType::Result), ""}};
        } else if (name == kResetSymbol) {
            f.params = {Param{qubit, ""}};
        } else if (auto g = gate_from_symbol(name)) {
            if (gate_is_parametric(*g)) f.params.push_back(Param{Type::f64(), ""});
            for (int i = 0; i < gate_arity(*g); ++i) f.params.push_back(Param{qubit, ""});
        }
        return f;
    }

    void note_type(const Type &t) {
        if (t.is_pointer() && opaque_name(t.base)[0] != '\0') used_types_.insert(t.base);
    }

    void collect_types(const Scope &scope) {
        used_types_.insert(BaseType::Comm);
        for (const auto &op : scope.operations()) {
            if (std::holds_alternative<GateOperation>(op) || std::holds_alternative<ResetOperation>(op)) {
                used_types_.insert(BaseType::Qubit);
            } else if (std::holds_alternative<MeasureOperation>(op)) {
                used_types_.insert(BaseType::Qubit);
                used_types_.insert(BaseType::Result);
            } else if (const auto *call = std::get_if<IntrinsicOperation>(&op)) {
                const Signature sig = signature_of(call->name);
                for (ParamKind k : sig.params) note_type(type_of(k));
                note_type(sig.return_type);
            } else if (const auto *cond = std::get_if<RankConditionalOperation>(&op)) {
                collect_types(*cond->then_scope);
                collect_types(*cond->else_scope);
            }
        }
    }

    static std::string comm_name(int id) { return id == 0 ? "world" : "comm" + std::to_string(id); }
    static std::string group_name(int id) { return "group" + std::to_string(id); }

    Instruction call(const std::string &callee, Type ret, std::vector<Value> operands) {
        note_callee(callee);
        Instruction inst;
        inst.opcode = Opcode::Call;
        inst.callee = callee;
        inst.type = ret;
        inst.operands = std::move(operands);
        return inst;
    }

    Value arg_value(const Arg &a) const {
        switch (a.kind) {
            case Arg::Kind::Qubit: return Value::address(Type::ptr(BaseType::Qubit), a.value);
            case Arg::Kind::QubitSlot: return Value::address(Type::ptr(BaseType::Qubit, 2), a.value);
            case Arg::Kind::Array: return Value::address(Type::ptr(BaseType::Array), a.value);
            case Arg::Kind::ArraySlot: return Value::address(Type::ptr(BaseType::Array, 2), a.value);
            case Arg::Kind::Bits: return Value::address(Type::ptr(BaseType::I1), a.value);
            case Arg::Kind::Int: return Value::integer(Type::i32(), a.value);
            case Arg::Kind::Comm: return Value::local(Type::ptr(BaseType::Comm), comm_name(static_cast<int>(a.value)));
            case Arg::Kind::Group: return Value::local(Type::ptr(BaseType::Group), group_name(static_cast<int>(a.value)));
        }
        return Value::integer(Type::i32(), 0);
    }

    void walk(const Scope &scope, bool is_main) {
        bool first_in_main = is_main;
        for (const auto &op : scope.operations()) {
            if (const auto *g = std::get_if<GateOperation>(&op)) {
                std::vector<Value> operands;
                if (gate_is_parametric(g->gate)) operands.push_back(Value::real(g->theta));
                for (auto q : g->qubits) operands.push_back(Value::address(Type::ptr(BaseType::Qubit), q.address));
                ex_.instruction(call(gate_symbol(g->gate), Type::void_(), std::move(operands)));
            } else if (const auto *m = std::get_if<MeasureOperation>(&op)) {
                ex_.instruction(call(kMeasureSymbol, Type::void_(),
                                     {Value::address(Type::ptr(BaseType::Qubit), m->qubit.address),
                                      Value::address(Type::ptr(BaseType::Result), m->result)}));
            } else if (const auto *r = std::get_if<ResetOperation>(&op)) {
                ex_.instruction(call(kResetSymbol, Type::void_(), {Value::address(Type::ptr(BaseType::Qubit), r->qubit.address)}));
            } else if (const auto *c = std::get_if<IntrinsicOperation>(&op)) {
                emit_intrinsic(*c);
                if (first_in_main) {
                    // The world communicator is fetched right after initialize.
                    Instruction world = call("__netqir__comm_world", Type::ptr(BaseType::Comm), {});
                    world.result = "world";
                    ex_.instruction(world);
                    first_in_main = false;
                }
            } else if (const auto *cond = std::get_if<RankConditionalOperation>(&op)) {
                emit_conditional(*cond);
            }
        }
    }

    void emit_intrinsic(const IntrinsicOperation &op) {
        const Signature sig = signature_of(op.name);
        std::vector<Value> operands;
        for (const auto &a : op.args) operands.push_back(arg_value(a));
        Instruction inst = call(op.name, sig.return_type, std::move(operands));
        inst.fold = op.fold;
        if (op.defines_group >= 0) inst.result = group_name(op.defines_group);
        if (op.defines_comm >= 0) inst.result = comm_name(op.defines_comm);
        ex_.instruction(inst);
    }

    void emit_conditional(const RankConditionalOperation &cond) {
        const int id = next_block_++;
        const std::string rank_value = "rank" + std::to_string(next_value_);
        const std::string test_value = "is_rank" + std::to_string(next_value_++);
        Instruction rank = call("__netqir__comm_rank", Type::i32(),
                                {Value::local(Type::ptr(BaseType::Comm), comm_name(cond.comm.id))});
        rank.result = rank_value;
        ex_.instruction(rank);

        Instruction cmp;
        cmp.opcode = Opcode::ICmp;
        cmp.pred = ICmpPred::Eq;
        cmp.type = Type::i32();
        cmp.result = test_value;
        cmp.operands = {Value::local(Type::i32(), rank_value), Value::integer(Type::i32(), cond.rank)};
        ex_.instruction(cmp);

        const std::string then_label = "then" + std::to_string(id);
        const std::string else_label = "else" + std::to_string(id);
        const std::string join_label = "join" + std::to_string(id);
        Instruction br;
        br.opcode = Opcode::CondBr;
        br.type = Type::i1();
        br.operands = {Value::local(Type::i1(), test_value)};
        br.targets = {then_label, else_label};
        ex_.instruction(br);

        Instruction jump;
        jump.opcode = Opcode::Br;
        jump.targets = {join_label};
        ex_.label(then_label);
        walk(*cond.then_scope, false);
        ex_.instruction(jump);
        ex_.label(else_label);
        walk(*cond.else_scope, false);
        ex_.instruction(jump);
        ex_.label(join_label);
    }
};

}  // namespace

void emit(const ProgramBuilder &builder, Executor &executor) {
    if (!ends_with_finalize(builder.main())) {
        throw Error(ErrorCode::UnterminatedProgram, "main scope does not end with finalize");
    }
    Walker(executor).run(builder.main());
}

std::string emit_text(const ProgramBuilder &builder) {
    PrinterExecutor ex;
    emit(builder, ex);
    return ex.text();
}

Program emit_program(const ProgramBuilder &builder) {
    ProgramExecutor ex;
    emit(builder, ex);
    return ex.program();
}

}  // namespace netqir
