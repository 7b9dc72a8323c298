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

#include "netqir/validate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "netqir/intrinsics.hpp"

namespace netqir {

namespace {

struct Callable {
    std::vector<Type> params;
    Type return_type;
    bool variadic_int32 = false;
};

std::optional<Callable> qis_signature(const std::string &symbol) {
    const Type qubit = Type::ptr(BaseType::Qubit);
    if (auto g = gate_from_symbol(symbol)) {
        Callable c;
        c.return_type = Type::void_();
        if (gate_is_parametric(*g)) c.params.push_back(Type::f64());
        for (int i = 0; i < gate_arity(*g); ++i) c.params.push_back(qubit);
        return c;
    }
    if (symbol == kMeasureSymbol) return Callable{{qubit, Type::ptr(BaseType::Result)}, Type::void_(), false};
    if (symbol == kResetSymbol) return Callable{{qubit}, Type::void_(), false};
    return std::nullopt;
}

std::optional<Callable> intrinsic_signature(const std::string &symbol) {
    if (is_netqir_symbol(symbol)) {
        try {
            const Signature s = signature_of(symbol);
            Callable c;
            for (ParamKind k : s.params) c.params.push_back(type_of(k));
            c.return_type = s.return_type;
            c.variadic_int32 = s.variadic_int32;
            return c;
        } catch (const Error &) {
            return std::nullopt;
        }
    }
    return qis_signature(symbol);
}

bool is_intrinsic_symbol(const std::string &symbol) { return is_netqir_symbol(symbol) || is_qis_symbol(symbol); }

std::string join_types(const std::vector<Type> &types) {
    std::string s = "(";
    for (size_t i = 0; i < types.size(); ++i) {
        if (i) s += ", ";
        s += to_string(types[i]);
    }
    return s + ")";
}

class Validator {
  public:
    explicit Validator(const Program &p) : program_(p) {}

    std::vector<Diagnostic> run() {
        check_functions();
        for (const auto &f : program_.functions) {
            if (!f.is_declaration) check_body(f);
        }
        if (const Function *entry = program_.entry()) {
            if (!entry->blocks.empty() && block_structure_ok_) check_ordering(*entry);
        }
        std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic &a, const Diagnostic &b) {
            return a.loc.line != b.loc.line ? a.loc.line < b.loc.line : a.loc.column < b.loc.column;
        });
        return diags_;
    }

  private:
    const Program &program_;
    std::vector<Diagnostic> diags_;
    bool block_structure_ok_ = true;

    void report(SourceLoc loc, const char *rule, std::string message) {
        diags_.push_back({loc, Severity::Error, rule, std::move(message)});
    }

    void check_functions() {
        std::set<std::string> names;
        int entries = 0;
        for (const auto &f : program_.functions) {
            if (!names.insert(f.name).second) report(f.loc, rules::kDuplicateFunction, "function @" + f.name + " defined twice");
            if (f.entry_point && !f.is_declaration) ++entries;
            if (!is_intrinsic_symbol(f.name)) continue;
            auto sig = intrinsic_signature(f.name);
            if (!sig) {
                report(f.loc, rules::kUnknownIntrinsic, "unknown intrinsic @" + f.name);
                continue;
            }
            std::vector<Type> declared;
            for (const auto &p : f.params) declared.push_back(p.type);
            if (declared != sig->params || f.variadic != sig->variadic_int32 || !(f.return_type == sig->return_type)) {
                report(f.loc, rules::kSignatureMismatch,
                       "@" + f.name + " declared as " + to_string(f.return_type) + " " + join_types(declared) +
                           ", expected " + to_string(sig->return_type) + " " + join_types(sig->params));
            }
        }
        if (entries == 0) report(SourceLoc{1, 1}, rules::kEntryMissing, "no function carries the entry_point attribute");
        if (entries > 1) report(SourceLoc{1, 1}, rules::kMultipleEntry, "more than one entry_point function");
    }

    std::optional<Callable> callable(const std::string &callee) const {
        if (is_intrinsic_symbol(callee)) return intrinsic_signature(callee);
        const Function *f = program_.find(callee);
        if (!f) return std::nullopt;
        Callable c;
        for (const auto &p : f->params) c.params.push_back(p.type);
        c.return_type = f->return_type;
        return c;
    }

    static bool is_terminator(Opcode op) { return op == Opcode::Br || op == Opcode::CondBr || op == Opcode::Ret; }

    void check_body(const Function &f) {
        std::map<std::string, size_t> labels;
        for (size_t b = 0; b < f.blocks.size(); ++b) {
            if (!labels.emplace(f.blocks[b].label, b).second) {
                report(f.blocks[b].loc, rules::kRedefinedValue, "label %" + f.blocks[b].label + " defined twice");
            }
        }
        if (f.blocks.empty()) {
            report(f.loc, rules::kMissingTerminator, "function @" + f.name + " has no blocks");
            block_structure_ok_ = false;
            return;
        }
        bool structure_ok = true;
        std::vector<std::vector<size_t>> succ(f.blocks.size());
        for (size_t b = 0; b < f.blocks.size(); ++b) {
            const auto &block = f.blocks[b];
            if (block.instructions.empty() || !is_terminator(block.instructions.back().opcode)) {
                report(block.loc, rules::kMissingTerminator, "block %" + block.label + " does not end in br or ret");
                structure_ok = false;
            }
            for (size_t i = 0; i < block.instructions.size(); ++i) {
                const auto &inst = block.instructions[i];
                if (is_terminator(inst.opcode) && i + 1 != block.instructions.size()) {
                    report(inst.loc, rules::kMissingTerminator, "terminator in the middle of block %" + block.label);
                    structure_ok = false;
                }
                for (const auto &t : inst.targets) {
                    auto it = labels.find(t);
                    if (it == labels.end()) {
                        report(inst.loc, rules::kUnknownLabel, "branch to unknown label %" + t);
                        structure_ok = false;
                    } else {
                        succ[b].push_back(it->second);
                    }
                }
            }
        }
        if (!structure_ok) {
            if (f.entry_point) block_structure_ok_ = false;
            return;
        }
        const auto dom = dominators(succ);

        // Definitions: name -> (block, index, type); params use index -1.
        struct Def {
            size_t block;
            long index;
            Type type;
        };
        std::map<std::string, Def> defs;
        for (const auto &p : f.params) {
            if (p.name.empty()) continue;
            if (!defs.emplace(p.name, Def{0, -1, p.type}).second) {
                report(f.loc, rules::kRedefinedValue, "parameter %" + p.name + " defined twice");
            }
        }
        for (size_t b = 0; b < f.blocks.size(); ++b) {
            const auto &insts = f.blocks[b].instructions;
            for (size_t i = 0; i < insts.size(); ++i) {
                const auto &inst = insts[i];
                if (!inst.result) continue;
                Type t = inst.opcode == Opcode::ICmp ? Type::i1() : inst.type;
                if (!defs.emplace(*inst.result, Def{b, static_cast<long>(i), t}).second) {
                    report(inst.loc, rules::kRedefinedValue, "value %" + *inst.result + " defined twice");
                }
            }
        }

        for (size_t b = 0; b < f.blocks.size(); ++b) {
            const auto &insts = f.blocks[b].instructions;
            for (size_t i = 0; i < insts.size(); ++i) {
                const auto &inst = insts[i];
                for (const auto &v : inst.operands) {
                    if (v.kind != Value::Kind::Local) continue;
                    const SourceLoc loc = v.loc.line ? v.loc : inst.loc;
                    auto it = defs.find(v.name);
                    if (it == defs.end()) {
                        report(loc, rules::kUndefinedValue, "use of undefined value %" + v.name);
                        continue;
                    }
                    const Def &d = it->second;
                    const bool visible = d.index < 0 || (d.block == b ? d.index < static_cast<long>(i) : dom[b].count(d.block) > 0);
                    if (!visible) report(loc, rules::kUndefinedValue, "value %" + v.name + " used before its definition");
                    if (!(d.type == v.type)) {
                        report(loc, rules::kTypeMismatch,
                               "%" + v.name + " has type " + to_string(d.type) + ", used as " + to_string(v.type));
                    }
                }
                check_instruction(f, inst);
            }
        }
    }

    void check_instruction(const Function &f, const Instruction &inst) {
        switch (inst.opcode) {
            case Opcode::Call: check_call(inst); break;
            case Opcode::ICmp:
            case Opcode::Add:
            case Opcode::Sub:
                if (!inst.type.is_integer()) {
                    report(inst.loc, rules::kTypeMismatch, "integer operation on non-integer type " + to_string(inst.type));
                }
                break;
            case Opcode::CondBr:
                if (!(inst.type == Type::i1())) report(inst.loc, rules::kTypeMismatch, "branch condition must be i1");
                break;
            case Opcode::Ret:
                if (!(inst.type == f.return_type)) {
                    report(inst.loc, rules::kTypeMismatch,
                           "ret " + to_string(inst.type) + " in function returning " + to_string(f.return_type));
                }
                break;
            case Opcode::Br: break;
        }
    }

    void check_call(const Instruction &inst) {
        const bool intrinsic = is_intrinsic_symbol(inst.callee);
        if (!program_.find(inst.callee)) {
            report(inst.loc, rules::kUndeclaredCallee, "call to undeclared function @" + inst.callee);
        }
        auto sig = callable(inst.callee);
        if (!sig) {
            if (intrinsic) report(inst.loc, rules::kUnknownIntrinsic, "unknown intrinsic @" + inst.callee);
            return;
        }
        if (inst.fold) {
            bool is_reduce = false;
            try {
                is_reduce = is_netqir_symbol(inst.callee) && classify(inst.callee).base == IntrinsicBase::Reduce;
            } catch (const Error &) {
            }
            if (!is_reduce) {
                report(inst.loc, rules::kBadFold, "!fold is only allowed on reduce calls");
            } else if (!fold_gate_from_name(*inst.fold)) {
                report(inst.loc, rules::kBadFold, "unsupported fold gate '" + *inst.fold + "'");
            }
        }
        std::vector<Type> actual;
        for (const auto &v : inst.operands) actual.push_back(v.type);
        bool arity_ok = sig->variadic_int32 ? actual.size() >= sig->params.size() : actual.size() == sig->params.size();
        bool types_ok = true;
        if (arity_ok) {
            for (size_t k = 0; k < actual.size(); ++k) {
                const Type expected = k < sig->params.size() ? sig->params[k] : Type::i32();
                if (!(actual[k] == expected)) types_ok = false;
            }
        }
        if (sig->variadic_int32 && arity_ok && types_ok) {
            const Value &count = inst.operands[0];
            if (count.kind == Value::Kind::Int && static_cast<size_t>(count.int_value) + 1 != actual.size()) arity_ok = false;
        }
        if (!arity_ok || !types_ok) {
            std::vector<Type> expected = sig->params;
            report(inst.loc, arity_ok ? rules::kTypeMismatch : rules::kArityMismatch,
                   "@" + inst.callee + " called with " + join_types(actual) + ", expected " + join_types(expected) +
                       (sig->variadic_int32 ? " followed by the listed i32 ranks" : ""));
        }
        if (!(inst.type == sig->return_type)) {
            report(inst.loc, rules::kTypeMismatch,
                   "@" + inst.callee + " returns " + to_string(sig->return_type) + ", called as " + to_string(inst.type));
        }
        if (inst.result && inst.type.base == BaseType::Void && !inst.type.is_pointer()) {
            report(inst.loc, rules::kTypeMismatch, "void call cannot define a value");
        }
    }

    static std::vector<std::set<size_t>> dominators(const std::vector<std::vector<size_t>> &succ) {
        const size_t n = succ.size();
        std::vector<std::vector<size_t>> pred(n);
        for (size_t b = 0; b < n; ++b) {
            for (size_t s : succ[b]) pred[s].push_back(b);
        }
        std::set<size_t> all;
        for (size_t b = 0; b < n; ++b) all.insert(b);
        std::vector<std::set<size_t>> dom(n, all);
        dom[0] = {0};
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t b = 1; b < n; ++b) {
                std::set<size_t> next = all;
                bool any_pred = false;
                for (size_t p : pred[b]) {
                    any_pred = true;
                    std::set<size_t> tmp;
                    std::set_intersection(next.begin(), next.end(), dom[p].begin(), dom[p].end(),
                                          std::inserter(tmp, tmp.begin()));
                    next = std::move(tmp);
                }
                if (!any_pred) next.clear();
                next.insert(b);
                if (next != dom[b]) {
                    dom[b] = std::move(next);
                    changed = true;
                }
            }
        }
        return dom;
    }

    // Forward must-analyses over the entry function: initialize/finalize
    // ordering and qubits consumed by teledata sends.
    struct FlowState {
        bool reached = false;
        bool initialized = false;
        bool finalized = false;
        std::set<std::int64_t> consumed;
    };

    static FlowState meet(const FlowState &a, const FlowState &b) {
        if (!a.reached) return b;
        if (!b.reached) return a;
        FlowState out;
        out.reached = true;
        out.initialized = a.initialized && b.initialized;
        out.finalized = a.finalized && b.finalized;
        std::set_intersection(a.consumed.begin(), a.consumed.end(), b.consumed.begin(), b.consumed.end(),
                              std::inserter(out.consumed, out.consumed.begin()));
        return out;
    }

    static bool same(const FlowState &a, const FlowState &b) {
        return a.reached == b.reached && a.initialized == b.initialized && a.finalized == b.finalized &&
               a.consumed == b.consumed;
    }

    std::optional<IntrinsicClassification> netqir_class(const std::string &callee) const {
        if (!is_netqir_symbol(callee)) return std::nullopt;
        try {
            return classify(callee);
        } catch (const Error &) {
            return std::nullopt;
        }
    }

    FlowState transfer(const BasicBlock &block, FlowState state, bool emit) {
        for (const auto &inst : block.instructions) {
            if (inst.opcode == Opcode::Ret && emit && !state.finalized) {
                report(inst.loc, rules::kMissingFinalize, "path reaches ret without __netqir__finalize");
            }
            if (inst.opcode != Opcode::Call) continue;
            const auto c = netqir_class(inst.callee);
            if (c && c->base == IntrinsicBase::Initialize) state.initialized = true;
            if (c && c->base == IntrinsicBase::Finalize) state.finalized = true;
            if (c && (c->is_communication() || c->base == IntrinsicBase::Finalize) && !state.initialized && emit) {
                report(inst.loc, rules::kCommBeforeInitialize,
                       "@" + inst.callee + " may execute before __netqir__initialize");
            }
            // Qubit linearity: addresses consumed by an explicit teledata send.
            auto address_range = [&](size_t ptr_index, std::optional<size_t> count_index) -> std::vector<std::int64_t> {
                std::vector<std::int64_t> out;
                if (ptr_index >= inst.operands.size()) return out;
                const Value &p = inst.operands[ptr_index];
                if (p.kind != Value::Kind::Address) return out;
                std::int64_t n = 1;
                if (count_index) {
                    if (*count_index >= inst.operands.size() || inst.operands[*count_index].kind != Value::Kind::Int) return out;
                    n = inst.operands[*count_index].int_value;
                }
                for (std::int64_t k = 0; k < n; ++k) out.push_back(p.int_value + k);
                return out;
            };
            std::vector<std::int64_t> used;
            for (const auto &v : inst.operands) {
                if (v.kind == Value::Kind::Address && v.type == Type::ptr(BaseType::Qubit)) used.push_back(v.int_value);
            }
            const bool is_reset = inst.callee == kResetSymbol;
            const bool is_recv = c && c->base == IntrinsicBase::QRecv;
            if (!is_reset && !is_recv && emit) {
                for (auto a : used) {
                    if (state.consumed.count(a)) {
                        report(inst.loc, rules::kUseAfterSend,
                               "qubit " + std::to_string(a) + " used after a teledata send without reset");
                    }
                }
            }
            if (is_reset) {
                for (auto a : used) state.consumed.erase(a);
            }
            if (is_recv) {
                for (auto a : address_range(0, c->array ? std::optional<size_t>(1) : std::nullopt)) state.consumed.erase(a);
            }
            if (c && c->base == IntrinsicBase::QSend && c->protocol == Protocol::Teledata) {
                for (auto a : address_range(0, c->array ? std::optional<size_t>(1) : std::nullopt)) state.consumed.insert(a);
            }
        }
        return state;
    }

    void check_ordering(const Function &f) {
        std::map<std::string, size_t> labels;
        for (size_t b = 0; b < f.blocks.size(); ++b) labels.emplace(f.blocks[b].label, b);
        const size_t n = f.blocks.size();
        std::vector<std::vector<size_t>> pred(n);
        for (size_t b = 0; b < n; ++b) {
            for (const auto &t : f.blocks[b].instructions.back().targets) pred[labels.at(t)].push_back(b);
        }
        std::vector<FlowState> in(n), out(n);
        in[0].reached = true;
        bool changed = true;
        int guard = 0;
        while (changed && guard++ < 1000) {
            changed = false;
            for (size_t b = 0; b < n; ++b) {
                FlowState s = b == 0 ? in[0] : FlowState{};
                for (size_t p : pred[b]) s = meet(s, out[p]);
                if (b == 0) {
                    // The entry block is also reached at function start.
                    FlowState start;
                    start.reached = true;
                    s = pred[0].empty() ? start : meet(start, s);
                }
                in[b] = s;
                FlowState o = s.reached ? transfer(f.blocks[b], s, false) : FlowState{};
                if (!same(o, out[b])) {
                    out[b] = std::move(o);
                    changed = true;
                }
            }
        }
        for (size_t b = 0; b < n; ++b) {
            if (in[b].reached) transfer(f.blocks[b], in[b], true);
        }
    }
};

}  // namespace

std::vector<Diagnostic> validate(const Program &program) { return Validator(program).run(); }

}  // namespace netqir
