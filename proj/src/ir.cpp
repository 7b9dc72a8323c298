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

#include "netqir/ir.hpp"

#include <algorithm>

namespace netqir {

bool Type::is_opaque_pointer() const {
    return pointer_depth > 0 && opaque_name(base)[0] != '\0';
}

const char *opaque_name(BaseType base) {
    switch (base) {
        case BaseType::Qubit: return "Qubit";
        case BaseType::Array: return "Array";
        case BaseType::Comm: return "Comm";
        case BaseType::Group: return "Group";
        case BaseType::Result: return "Result";
        default: return "";
    }
}

std::string to_string(const Type &t) {
    std::string s;
    switch (t.base) {
        case BaseType::Void: s = "void"; break;
        case BaseType::I1: s = "i1"; break;
        case BaseType::I32: s = "i32"; break;
        case BaseType::I64: s = "i64"; break;
        case BaseType::Double: s = "double"; break;
        default: s = std::string("%") + opaque_name(t.base); break;
    }
    s.append(static_cast<size_t>(t.pointer_depth), '*');
    return s;
}

Value Value::local(Type type, std::string name) {
    Value v;
    v.type = type;
    v.kind = Kind::Local;
    v.name = std::move(name);
    return v;
}

Value Value::integer(Type type, std::int64_t x) {
    Value v;
    v.type = type;
    v.kind = Kind::Int;
    v.int_value = x;
    return v;
}

Value Value::real(double x) {
    Value v;
    v.type = Type::f64();
    v.kind = Kind::Float;
    v.float_value = x;
    return v;
}

Value Value::address(Type type, std::int64_t addr) {
    Value v;
    v.type = type;
    v.kind = Kind::Address;
    v.int_value = addr;
    return v;
}

const Function *Program::find(const std::string &name) const {
    auto it = std::find_if(functions.begin(), functions.end(), [&](const Function &f) { return f.name == name; });
    return it == functions.end() ? nullptr : &*it;
}

const Function *Program::entry() const {
    const Function *found = nullptr;
    for (const auto &f : functions) {
        if (f.entry_point && !f.is_declaration) {
            if (found) return nullptr;
            found = &f;
        }
    }
    return found;
}

const char *to_string(GateKind g) {
    switch (g) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::CNOT: return "cnot";
        case GateKind::CZ: return "cz";
        case GateKind::CP: return "cp";
        case GateKind::SWAP: return "swap";
    }
    return "?";
}

int gate_arity(GateKind g) {
    switch (g) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Z: return 1;
        default: return 2;
    }
}

bool gate_is_parametric(GateKind g) { return g == GateKind::CP; }

namespace {
constexpr const char *kQisPrefix = "__quantum__qis__";
constexpr const char *kBodySuffix = "__body";
}  // namespace

bool is_qis_symbol(const std::string &symbol) { return symbol.rfind(kQisPrefix, 0) == 0; }

std::optional<GateKind> gate_from_symbol(const std::string &symbol) {
    for (GateKind g : {GateKind::H, GateKind::X, GateKind::Z, GateKind::CNOT, GateKind::CZ, GateKind::CP}) {
        if (symbol == gate_symbol(g)) return g;
    }
    return std::nullopt;
}

std::string gate_symbol(GateKind g) { return std::string(kQisPrefix) + to_string(g) + kBodySuffix; }

}  // namespace netqir
