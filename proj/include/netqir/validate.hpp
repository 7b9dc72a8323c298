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

#include <vector>

#include "netqir/diagnostics.hpp"
#include "netqir/ir.hpp"

namespace netqir {

/// Rule identifiers carried by validation diagnostics.
namespace rules {
inline constexpr const char *kEntryMissing = "entry-missing";
inline constexpr const char *kMultipleEntry = "multiple-entry";
inline constexpr const char *kUndeclaredCallee = "undeclared-callee";
inline constexpr const char *kUnknownIntrinsic = "unknown-intrinsic";
inline constexpr const char *kSignatureMismatch = "signature-mismatch";
inline constexpr const char *kArityMismatch = "arity-mismatch";
inline constexpr const char *kTypeMismatch = "type-mismatch";
inline constexpr const char *kUndefinedValue = "undefined-value";
inline constexpr const char *kRedefinedValue = "redefined-value";
inline constexpr const char *kUnknownLabel = "unknown-label";
inline constexpr const char *kMissingTerminator = "missing-terminator";
inline constexpr const char *kCommBeforeInitialize = "comm-before-initialize";
inline constexpr const char *kMissingFinalize = "missing-finalize";
inline constexpr const char *kUseAfterSend = "use-after-send";
inline constexpr const char *kBadFold = "bad-fold";
inline constexpr const char *kDuplicateFunction = "duplicate-function";
}  // namespace rules

/// Checks every structural, typing and ordering invariant of a program.
/// An empty result means the program can be traced and lowered.
std::vector<Diagnostic> validate(const Program &program);

}  // namespace netqir
