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

#include "netqir/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace netqir {

std::string to_string(const SourceLoc &loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

std::string to_string(const Diagnostic &d) {
    std::ostringstream out;
    out << d;
    return out.str();
}

std::ostream &operator<<(std::ostream &out, const Diagnostic &d) {
    out << to_string(d.loc) << ": " << (d.severity == Severity::Error ? "error" : "warning") << " [" << d.rule
        << "] " << d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic> &diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

const char *to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownIntrinsic: return "unknown-intrinsic";
        case ErrorCode::NotAMember: return "not-a-member";
        case ErrorCode::DuplicateRank: return "duplicate-rank";
        case ErrorCode::RankOutOfRange: return "rank-out-of-range";
        case ErrorCode::EmptyGroup: return "empty-group";
        case ErrorCode::ProtocolMismatch: return "protocol-mismatch";
        case ErrorCode::UnmatchedEndpoint: return "unmatched-endpoint";
        case ErrorCode::IndivisibleCount: return "indivisible-count";
        case ErrorCode::RootOutOfRange: return "root-out-of-range";
        case ErrorCode::CollectiveMismatch: return "collective-mismatch";
        case ErrorCode::NonCommutingReference: return "non-commuting-reference";
        case ErrorCode::UnsupportedProgram: return "unsupported-program";
        case ErrorCode::InvalidProgram: return "invalid-program";
        case ErrorCode::UnterminatedProgram: return "unterminated-program";
        case ErrorCode::Deadlock: return "deadlock-detected";
        case ErrorCode::CapacityExceeded: return "capacity-exceeded";
        case ErrorCode::NormDrift: return "norm-drift";
        case ErrorCode::MismatchedSubset: return "mismatched-subset";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace netqir
