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

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netqir {

/// Position in a source text. Line and column are 1-based; line 0 means the
/// construct did not come from text (e.g. it was built programmatically).
///
/// Locations never participate in structural equality of IR objects: two
/// programs that differ only in where their instructions were written compare
/// equal.
struct SourceLoc {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourceLoc &, const SourceLoc &) { return true; }
};

std::string to_string(const SourceLoc &loc);

enum class Severity { Error, Warning };

struct Diagnostic {
    SourceLoc loc;
    Severity severity = Severity::Error;
    std::string rule;
    std::string message;
};

std::string to_string(const Diagnostic &d);
std::ostream &operator<<(std::ostream &out, const Diagnostic &d);

bool has_errors(const std::vector<Diagnostic> &diags);

enum class ErrorCode {
    UnknownIntrinsic,
    NotAMember,
    DuplicateRank,
    RankOutOfRange,
    EmptyGroup,
    ProtocolMismatch,
    UnmatchedEndpoint,
    IndivisibleCount,
    RootOutOfRange,
    CollectiveMismatch,
    NonCommutingReference,
    UnsupportedProgram,
    InvalidProgram,
    UnterminatedProgram,
    Deadlock,
    CapacityExceeded,
    NormDrift,
    MismatchedSubset,
};

const char *to_string(ErrorCode code);

/// Exception raised by every operation whose failure is not expressed as a
/// diagnostic list.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix that what() carries.
    const std::string &message() const noexcept { return message_; }

  private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace netqir
