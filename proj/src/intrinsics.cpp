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

#include "netqir/intrinsics.hpp"

#include <array>
#include <utility>

namespace netqir {

const char *to_string(Protocol p) {
    switch (p) {
        case Protocol::Unspecified: return "unspecified";
        case Protocol::Teledata: return "teledata";
        case Protocol::Telegate: return "telegate";
    }
    return "?";
}

namespace {

struct BaseInfo {
    IntrinsicBase base;
    const char *name;
    bool allows_array;
    bool allows_protocol;
};

constexpr std::array<BaseInfo, 15> kBases = {{
    {IntrinsicBase::QSend, "qsend", true, true},
    {IntrinsicBase::QRecv, "qrecv", true, true},
    {IntrinsicBase::MeasureSend, "measure_send", true, false},
    {IntrinsicBase::MeasureRecv, "measure_recv", true, false},
    {IntrinsicBase::Scatter, "scatter", false, true},
    {IntrinsicBase::Gather, "gather", false, true},
    {IntrinsicBase::Reduce, "reduce", false, true},
    {IntrinsicBase::Expose, "expose", true, false},
    {IntrinsicBase::CommRank, "comm_rank", false, false},
    {IntrinsicBase::CommSize, "comm_size", false, false},
    {IntrinsicBase::CommWorld, "comm_world", false, false},
    {IntrinsicBase::Initialize, "initialize", false, false},
    {IntrinsicBase::Finalize, "finalize", false, false},
    {IntrinsicBase::GroupFromRanks, "group_from_ranks", false, false},
    {IntrinsicBase::CommFromGroup, "comm_from_group", false, false},
}};

const BaseInfo &info(IntrinsicBase b) {
    for (const auto &i : kBases) {
        if (i.base == b) return i;
    }
    throw Error(ErrorCode::UnknownIntrinsic, "bad base");
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void unknown(const std::string &name) {
    throw Error(ErrorCode::UnknownIntrinsic, "unknown intrinsic '" + name + "'");
}

}  // namespace

const char *base_name(IntrinsicBase b) { return info(b).name; }

bool IntrinsicClassification::is_point_to_point() const {
    return base == IntrinsicBase::QSend || base == IntrinsicBase::QRecv || base == IntrinsicBase::MeasureSend ||
           base == IntrinsicBase::MeasureRecv;
}

bool IntrinsicClassification::is_collective() const {
    return base == IntrinsicBase::Scatter || base == IntrinsicBase::Gather || base == IntrinsicBase::Reduce ||
           base == IntrinsicBase::Expose;
}

bool is_netqir_symbol(const std::string &symbol) { return symbol.rfind(kNetqirPrefix, 0) == 0; }

IntrinsicClassification classify(const std::string &symbol) {
    if (!is_netqir_symbol(symbol)) unknown(symbol);
    std::string rest = symbol.substr(std::string(kNetqirPrefix).size());
    IntrinsicClassification c;
    if (ends_with(rest, "_teledata")) {
        c.protocol = Protocol::Teledata;
        rest.resize(rest.size() - 9);
    } else if (ends_with(rest, "_telegate")) {
        c.protocol = Protocol::Telegate;
        rest.resize(rest.size() - 9);
    }
    if (ends_with(rest, "_array")) {
        c.array = true;
        rest.resize(rest.size() - 6);
    }
    for (const auto &i : kBases) {
        if (rest != i.name) continue;
        if (c.array && !i.allows_array) unknown(symbol);
        if (c.protocol != Protocol::Unspecified && !i.allows_protocol) unknown(symbol);
        c.base = i.base;
        return c;
    }
    unknown(symbol);
}

std::string intrinsic_name(const IntrinsicClassification &c) {
    std::string name = std::string(kNetqirPrefix) + base_name(c.base);
    if (c.array) name += "_array";
    if (c.protocol != Protocol::Unspecified) name += std::string("_") + to_string(c.protocol);
    return name;
}

const char *to_string(ParamKind k) {
    switch (k) {
        case ParamKind::Qubit: return "%Qubit*";
        case ParamKind::QubitSlot: return "%Qubit**";
        case ParamKind::Array: return "%Array*";
        case ParamKind::ArraySlot: return "%Array**";
        case ParamKind::BitBuffer: return "i1*";
        case ParamKind::Int32: return "i32";
        case ParamKind::Comm: return "%Comm*";
        case ParamKind::Group: return "%Group*";
    }
    return "?";
}

Type type_of(ParamKind k) {
    switch (k) {
        case ParamKind::Qubit: return Type::ptr(BaseType::Qubit);
        case ParamKind::QubitSlot: return Type::ptr(BaseType::Qubit, 2);
        case ParamKind::Array: return Type::ptr(BaseType::Array);
        case ParamKind::ArraySlot: return Type::ptr(BaseType::Array, 2);
        case ParamKind::BitBuffer: return Type::ptr(BaseType::I1);
        case ParamKind::Int32: return Type::i32();
        case ParamKind::Comm: return Type::ptr(BaseType::Comm);
        case ParamKind::Group: return Type::ptr(BaseType::Group);
    }
    return Type::void_();
}

Signature signature_of(const std::string &intrinsic_name) {
    const IntrinsicClassification c = classify(intrinsic_name);
    using P = ParamKind;
    Signature s;
    s.return_type = Type::void_();
    switch (c.base) {
        case IntrinsicBase::QSend:
        case IntrinsicBase::MeasureSend:
            s.params = c.array ? std::vector<P>{P::Array, P::Int32, P::Int32, P::Comm}
                               : std::vector<P>{P::Qubit, P::Int32, P::Comm};
            break;
        case IntrinsicBase::QRecv:
            s.params = c.array ? std::vector<P>{P::ArraySlot, P::Int32, P::Int32, P::Comm}
                               : std::vector<P>{P::QubitSlot, P::Int32, P::Comm};
            break;
        case IntrinsicBase::MeasureRecv: s.params = {P::BitBuffer, P::Int32, P::Int32, P::Comm}; break;
        case IntrinsicBase::Scatter:
        case IntrinsicBase::Gather:
        case IntrinsicBase::Reduce: s.params = {P::Array, P::Int32, P::Array, P::Int32, P::Int32, P::Comm}; break;
        case IntrinsicBase::Expose:
            s.params = c.array ? std::vector<P>{P::Array, P::Int32, P::Int32, P::Comm}
                               : std::vector<P>{P::Qubit, P::Int32, P::Comm};
            break;
        case IntrinsicBase::CommRank:
        case IntrinsicBase::CommSize:
            s.params = {P::Comm};
            s.return_type = Type::i32();
            break;
        case IntrinsicBase::CommWorld: s.return_type = Type::ptr(BaseType::Comm); break;
        case IntrinsicBase::Initialize:
        case IntrinsicBase::Finalize: break;
        case IntrinsicBase::GroupFromRanks:
            s.params = {P::Int32};
            s.variadic_int32 = true;
            s.return_type = Type::ptr(BaseType::Group);
            break;
        case IntrinsicBase::CommFromGroup:
            s.params = {P::Group};
            s.return_type = Type::ptr(BaseType::Comm);
            break;
    }
    return s;
}

const std::vector<std::string> &communication_intrinsic_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &i : kBases) {
            IntrinsicClassification c{i.base, false, Protocol::Unspecified};
            if (!c.is_communication()) continue;
            for (bool array : {false, true}) {
                if (array && !i.allows_array) continue;
                for (Protocol p : {Protocol::Unspecified, Protocol::Teledata, Protocol::Telegate}) {
                    if (p != Protocol::Unspecified && !i.allows_protocol) continue;
                    out.push_back(intrinsic_name({i.base, array, p}));
                }
            }
        }
        return out;
    }();
    return names;
}

const std::vector<std::string> &all_intrinsic_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out = communication_intrinsic_names();
        for (const auto &i : kBases) {
            IntrinsicClassification c{i.base, false, Protocol::Unspecified};
            if (!c.is_communication()) out.push_back(intrinsic_name(c));
        }
        return out;
    }();
    return names;
}

std::optional<GateKind> fold_gate_from_name(const std::string &name) {
    if (name == "cnot") return GateKind::CNOT;
    if (name == "cz") return GateKind::CZ;
    return std::nullopt;
}

}  // namespace netqir
