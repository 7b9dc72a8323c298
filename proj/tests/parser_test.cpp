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

#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "netqir/builder.hpp"
#include "netqir/intrinsics.hpp"
#include "netqir/parser.hpp"
#include "netqir/validate.hpp"
#include "test_support.hpp"

namespace netqir {
namespace {

using testing::corpus_files;
using testing::corpus_path;
using testing::read_text;

int count_comm_calls(const Program &p) {
    int n = 0;
    for (const auto &f : p.functions) {
        for (const auto &b : f.blocks) {
            for (const auto &i : b.instructions) {
                if (i.opcode == Opcode::Call && is_netqir_symbol(i.callee) && classify(i.callee).is_communication()) ++n;
            }
        }
    }
    return n;
}

TEST(Lexer, SkipsComments) {
    const LexResult r = lex("; header\n%Qubit = type opaque ; trailing\n");
    ASSERT_TRUE(r.diagnostics.empty());
    ASSERT_GE(r.tokens.size(), 4u);
    EXPECT_EQ(r.tokens[0].kind, Token::Kind::LocalSymbol);
    EXPECT_EQ(r.tokens[0].text, "Qubit");
    EXPECT_EQ(r.tokens[0].loc.line, 2);
    EXPECT_EQ(r.tokens[0].loc.column, 1);
}

TEST(Lexer, ReportsStrayCharacters) {
    const LexResult r = lex("define void @main() {\n  `\n}");
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].loc.line, 2);
    EXPECT_EQ(r.diagnostics[0].loc.column, 3);
}

TEST(Lexer, Ellipsis) {
    const LexResult r = lex("declare %Group* @__netqir__group_from_ranks(i32, ...)");
    ASSERT_TRUE(r.diagnostics.empty());
    bool found = false;
    for (const auto &t : r.tokens) found = found || (t.kind == Token::Kind::Punct && t.text == "...");
    EXPECT_TRUE(found);
}

TEST(Parse, TeleportProgram) {
    ParseResult r = parse(read_text(corpus_path("teleport.nqir")));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(count_comm_calls(*r.program), 2);
    const Function *main = r.program->entry();
    ASSERT_NE(main, nullptr);
    bool rank_branch = false;
    for (const auto &b : main->blocks) {
        for (const auto &i : b.instructions) rank_branch = rank_branch || i.opcode == Opcode::CondBr;
    }
    EXPECT_TRUE(rank_branch);
}

TEST(Parse, DeclarationOnlyHasNoEntry) {
    ParseResult r = parse("%Qubit = type opaque\n%Comm = type opaque\ndeclare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n");
    ASSERT_TRUE(r.program.has_value());
    EXPECT_EQ(r.program->functions.size(), 1u);
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].rule, rules::kEntryMissing);
}

TEST(Parse, UnknownIntrinsicSuffix) {
    ParseResult r = parse(read_text(corpus_path("invalid/unknown_intrinsic.nqir")));
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.diagnostics[0].rule, rules::kUnknownIntrinsic);
    EXPECT_EQ(r.diagnostics[0].loc.line, 15);
}

TEST(Parse, SyntaxErrorIsLocated) {
    ParseResult r = parse(read_text(corpus_path("invalid/syntax_error.nqir")));
    EXPECT_FALSE(r.program.has_value());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].loc.line, 24);
}

TEST(Parse, UnknownGateIsADiagnostic) {
    ParseResult r = parse(
        "%Qubit = type opaque\n"
        "define void @main() #0 {\nentry:\n"
        "  call void @__quantum__qis__t__body(%Qubit* null)\n  ret void\n}\n"
        "declare void @__quantum__qis__t__body(%Qubit*)\n"
        "attributes #0 = { \"entry_point\" }\n");
    EXPECT_FALSE(r.ok());
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].loc.line, 4);
}

TEST(RoundTrip, CorpusIsAFixedPoint) {
    const auto files = corpus_files();
    ASSERT_GE(files.size(), 15u);
    for (const auto &path : files) {
        SCOPED_TRACE(path);
        ParseResult first = parse(read_text(path));
        ASSERT_TRUE(first.ok()) << (first.diagnostics.empty() ? "" : to_string(first.diagnostics[0]));
        const std::string once = print(*first.program);
        ParseResult second = parse(once);
        ASSERT_TRUE(second.ok());
        EXPECT_EQ(*second.program, *first.program);
        EXPECT_EQ(print(*second.program), once);
    }
}

TEST(RoundTrip, CorpusCoversEveryIntrinsic) {
    std::set<std::string> used;
    for (const auto &path : corpus_files()) {
        ParseResult r = parse(read_text(path));
        for (const auto &f : r.program->functions) {
            if (f.is_declaration && is_netqir_symbol(f.name)) used.insert(f.name);
        }
    }
    for (const auto &name : all_intrinsic_names()) EXPECT_TRUE(used.count(name)) << name;
}

TEST(RoundTrip, MinimalProgram) {
    auto b = new_program();
    b->main().finalize();
    const std::string text = emit_text(*b);
    ParseResult r = parse(text);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(print(*r.program), text);
}

TEST(RoundTrip, DoublesKeepFullPrecision) {
    auto b = new_program();
    b->main().cp(std::numbers::pi / 2, QubitRef{0}, QubitRef{1}).finalize();
    const std::string text = emit_text(*b);
    EXPECT_NE(text.find("double 1.5707963267948966"), std::string::npos) << text;
    ParseResult r = parse(text);
    ASSERT_TRUE(r.ok());
    for (const auto &blk : r.program->entry()->blocks) {
        for (const auto &i : blk.instructions) {
            if (i.callee == "__quantum__qis__cp__body") {
                EXPECT_EQ(i.operands[0].float_value, std::numbers::pi / 2);
            }
        }
    }
    EXPECT_EQ(format_double(0.1), "1.0000000000000001e-01");
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify("__netqir__qsend_array_teledata"),
              (IntrinsicClassification{IntrinsicBase::QSend, true, Protocol::Teledata}));
    EXPECT_EQ(classify("__netqir__expose"), (IntrinsicClassification{IntrinsicBase::Expose, false, Protocol::Unspecified}));
    EXPECT_EQ(classify("__netqir__scatter_telegate"),
              (IntrinsicClassification{IntrinsicBase::Scatter, false, Protocol::Telegate}));
}

TEST(Classify, RejectsNamesOutsideTheGrammar) {
    for (const char *bad : {"__netqir__qsend_quantum", "__netqir__expose_teledata", "__netqir__qsend_teledata_array",
                            "__netqir__", "__netqir__comm_rank_array"}) {
        EXPECT_THROW(classify(bad), Error) << bad;
    }
}

TEST(Classify, BijectionOverTheNameSet) {
    std::set<std::tuple<int, bool, int>> seen;
    for (const auto &name : all_intrinsic_names()) {
        const IntrinsicClassification c = classify(name);
        EXPECT_EQ(intrinsic_name(c), name);
        EXPECT_TRUE(seen.insert({static_cast<int>(c.base), c.array, static_cast<int>(c.protocol)}).second) << name;
    }
}

}  // namespace
}  // namespace netqir
