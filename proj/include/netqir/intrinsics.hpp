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

#include <optional>
#include <string>
#include <vector>

#include "netqir/ir.hpp"

namespace netqir {

/// Communication protocol requested by an intrinsic suffix or chosen by the compiler.
enum class Protocol { Unspecified, Teledata, Telegate };

const char *to_string(Protocol p);

/// Base operation of a `__netqir__` symbol, with modifiers stripped.
enum class IntrinsicBase {
    QSend,
    QRecv,
    MeasureSend,
    MeasureRecv,
    Scatter,
    Gather,
    Reduce,
    Expose,
    CommRank,
    CommSize,
    CommWorld,
    Initialize,
    Finalize,
    GroupFromRanks,
    CommFromGroup,
};

const char *base_name(IntrinsicBase b);

struct IntrinsicClassification {
    IntrinsicBase base = IntrinsicBase::QSend;
    bool array = false;
    Protocol protocol = Protocol::Unspecified;

    bool is_point_to_point() const;
    bool is_collective() const;
    bool is_communication() const { return is_point_to_point() || is_collective(); }
    bool is_send() const { return base == IntrinsicBase::QSend || base == IntrinsicBase::MeasureSend; }
    bool is_recv() const { return base == IntrinsicBase::QRecv || base == IntrinsicBase::MeasureRecv; }

    friend bool operator==(const IntrinsicClassification &, const IntrinsicClassification &) = default;
};

/// Semantic parameter kinds of the intrinsic signature table.
enum class ParamKind {
    Qubit,       ///< %Qubit*
    QubitSlot,   ///< %Qubit** (receive slot)
    Array,       ///< %Array*
    ArraySlot,   ///< %Array** (receive slot)
    BitBuffer,   ///< i1*
    Int32,       ///< i32
    Comm,        ///< %Comm*
    Group,       ///< %Group*
};

const char *to_string(ParamKind k);
Type type_of(ParamKind k);

struct Signature {
    std::vector<ParamKind> params;
    Type return_type;
    /// Trailing `i32` values after the fixed parameters (group_from_ranks).
    bool variadic_int32 = false;

    friend bool operator==(const Signature &, const Signature &) = default;
};

inline constexpr const char *kNetqirPrefix = "__netqir__";

/// Signature of a `__netqir__` intrinsic. Throws Error(UnknownIntrinsic).
Signature signature_of(const std::string &intrinsic_name);

/// Decomposes a `__netqir__` symbol into base plus optional `_array` and
/// protocol modifiers. Throws Error(UnknownIntrinsic).
IntrinsicClassification classify(const std::string &symbol);

/// Inverse of classify.
std::string intrinsic_name(const IntrinsicClassification &c);

/// Every communication intrinsic of the point-to-point and collective tables.
const std::vector<std::string> &communication_intrinsic_names();
/// Every `__netqir__` intrinsic: communication, state and datatype functions.
const std::vector<std::string> &all_intrinsic_names();

bool is_netqir_symbol(const std::string &symbol);

/// Combining gate of a reduce call; CNOT when the attribute is absent.
std::optional<GateKind> fold_gate_from_name(const std::string &name);

}  // namespace netqir
