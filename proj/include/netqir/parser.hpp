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
#include <string_view>
#include <vector>

#include "netqir/diagnostics.hpp"
#include "netqir/ir.hpp"

namespace netqir {

struct Token {
    enum class Kind {
        Keyword,
        GlobalSymbol,  ///< @name
        LocalSymbol,   ///< %name
        AttrRef,       ///< #N
        Integer,
        Float,
        String,
        Punct,
        TypeName,      ///< void, i1, i32, i64, double
        Label,         ///< `name:` at the start of a block
        End,
    };

    Kind kind = Kind::End;
    std::string text;
    SourceLoc loc;
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diagnostics;
};

/// Splits `.nqir` text into tokens. Comments (`;` to end of line) are dropped.
LexResult lex(std::string_view text);

struct ParseResult {
    std::optional<Program> program;  ///< absent on lexical or syntax errors
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value() && !has_errors(diagnostics); }
};

/// Parses a module and runs validate() on it. Syntax errors stop parsing;
/// semantic problems are reported alongside the parsed program.
ParseResult parse(std::string_view text);

/// Canonical text of a program. Stable byte-for-byte for equal programs.
std::string print(const Program &program);

/// One instruction line, indented and newline-terminated.
std::string print_instruction(const Instruction &inst);
/// `define`/`declare` header of a function, without the body or newline.
std::string print_signature(const Function &f);

/// Shortest text that round-trips a double exactly (17 significant digits).
std::string format_double(double v);

}  // namespace netqir
