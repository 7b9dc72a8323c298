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

#include "netqir/diagnostics.hpp"

namespace netqir {

/// Scalar or opaque base of an IR type; pointer depth is tracked separately.
enum class BaseType { Void, I1, I32, I64, Double, Qubit, Array, Comm, Group, Result };

struct Type {
    BaseType base = BaseType::Void;
    int pointer_depth = 0;

    static Type void_() { return {BaseType::Void, 0}; }
    static Type i1() { return {BaseType::I1, 0}; }
    static Type i32() { return {BaseType::I32, 0}; }
    static Type i64() { return {BaseType::I64, 0}; }
    static Type f64() { return {BaseType::Double, 0}; }
    static Type ptr(BaseType base, int depth = 1) { return {base, depth}; }

    bool is_integer() const {
        return pointer_depth == 0 && (base == BaseType::I1 || base == BaseType::I32 || base == BaseType::I64);
    }
    bool is_pointer() const { return pointer_depth > 0; }
    bool is_opaque_pointer() const;

    friend bool operator==(const Type &, const Type &) = default;
};

std::string to_string(const Type &t);
/// Name of the opaque struct (without `%`), e.g. "Qubit". Empty for scalars.
const char *opaque_name(BaseType base);

/// An instruction operand.
struct Value {
    enum class Kind {
        Local,     ///< `%name` SSA value or parameter
        Int,       ///< integer literal (also `true`/`false` for i1)
        Float,     ///< double literal
        Address,   ///< static pointer: `null` (address 0) or `inttoptr (i64 N to T)`
    };

    Type type;
    Kind kind = Kind::Int;
    std::string name;
    std::int64_t int_value = 0;
    double float_value = 0.0;
    SourceLoc loc;

    static Value local(Type type, std::string name);
    static Value integer(Type type, std::int64_t v);
    static Value real(double v);
    static Value address(Type type, std::int64_t addr);

    friend bool operator==(const Value &, const Value &) = default;
};

enum class Opcode { Call, Br, CondBr, Ret, ICmp, Add, Sub };
enum class ICmpPred { Eq, Ne, Slt };

struct Instruction {
    Opcode opcode = Opcode::Call;
    std::optional<std::string> result;  ///< SSA name defined, without `%`
    Type type;                          ///< call return type / operand type of icmp, add, sub, ret
    std::string callee;                 ///< Call: symbol without `@`
    std::vector<Value> operands;        ///< call args; icmp/add/sub lhs, rhs; condbr cond; ret value
    ICmpPred pred = ICmpPred::Eq;
    std::vector<std::string> targets;   ///< Br: 1 label; CondBr: then, else
    std::optional<std::string> fold;    ///< combining gate attached to a reduce call
    SourceLoc loc;

    friend bool operator==(const Instruction &, const Instruction &) = default;
};

struct BasicBlock {
    std::string label;
    std::vector<Instruction> instructions;
    SourceLoc loc;

    friend bool operator==(const BasicBlock &, const BasicBlock &) = default;
};

struct Param {
    Type type;
    std::string name;  ///< empty in declarations

    friend bool operator==(const Param &, const Param &) = default;
};

struct Function {
    std::string name;
    Type return_type;
    std::vector<Param> params;
    bool variadic = false;
    bool is_declaration = false;
    bool entry_point = false;
    std::vector<BasicBlock> blocks;
    SourceLoc loc;

    friend bool operator==(const Function &, const Function &) = default;
};

struct Program {
    std::vector<std::string> opaque_types;  ///< in declaration order, without `%`
    std::vector<Function> functions;

    const Function *find(const std::string &name) const;
    /// The unique entry-point definition, or nullptr if there is not exactly one.
    const Function *entry() const;

    friend bool operator==(const Program &, const Program &) = default;
};

/// The fixed gate set of the base instruction set.
enum class GateKind { H, X, Z, CNOT, CZ, CP, SWAP };

const char *to_string(GateKind g);
int gate_arity(GateKind g);
bool gate_is_parametric(GateKind g);

/// Maps a `__quantum__qis__<g>__body` symbol to its gate. SWAP is a primitive-level
/// gate only and is never returned here.
std::optional<GateKind> gate_from_symbol(const std::string &symbol);
std::string gate_symbol(GateKind g);

inline constexpr const char *kMeasureSymbol = "__quantum__qis__mz__body";
inline constexpr const char *kResetSymbol = "__quantum__qis__reset__body";

bool is_qis_symbol(const std::string &symbol);

}  // namespace netqir
