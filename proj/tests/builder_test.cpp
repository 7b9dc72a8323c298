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

#include "netqir/builder.hpp"
#include "netqir/lowering.hpp"
#include "netqir/parser.hpp"
#include "netqir/qft.hpp"
#include "netqir/validate.hpp"
#include "test_support.hpp"

namespace netqir {
namespace {

std::unique_ptr<ProgramBuilder> teleport_builder() {
    auto b = new_program();
    Scope &main = b->main();
    const CommRef world = b->world();
    auto &first = main.if_rank(world, 0);
    first.then_scope->h(QubitRef{0}).qsend(QubitRef{0}, 1, world, Protocol::Teledata);
    rank_conditional(*first.else_scope, world, 1).qrecv(QubitRef{0}, 0, world, Protocol::Teledata);
    main.finalize();
    return b;
}

TEST(Builder, InitializeComesFirst) {
    auto b = new_program();
    b->main().qsend(QubitRef{0}, 1, b->world()).finalize();
    const std::string text = emit_text(*b);
    const auto init = text.find("call void @__netqir__initialize()");
    ASSERT_NE(init, std::string::npos);
    EXPECT_LT(init, text.find("call %Comm* @__netqir__comm_world()"));
    EXPECT_LT(init, text.find("call void @__netqir__qsend("));
    EXPECT_LT(init, text.find("call void @__netqir__finalize()"));
}

TEST(Builder, ProgramsAreIndependent) {
    auto a = new_program();
    auto b = new_program();
    a->main().h(QubitRef{0});
    EXPECT_EQ(a->main().operations().size(), 2u);
    EXPECT_EQ(b->main().operations().size(), 1u);
}

TEST(Builder, UnterminatedProgram) {
    auto b = new_program();
    b->main().h(QubitRef{0});
    try {
        emit_text(*b);
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnterminatedProgram);
    }
}

TEST(Builder, TeleportSendsOnRankZeroAndReceivesOnRankOne) {
    const Program built = emit_program(*teleport_builder());
    EXPECT_TRUE(validate(built).empty());
    const std::vector<RankTrace> traces = trace(built, 2);
    auto callees = [](const RankTrace &t) {
        std::vector<std::string> out;
        for (const auto &op : t.ops) {
            if (op.kind == TraceOp::Kind::Comm) out.push_back(op.callee);
        }
        return out;
    };
    EXPECT_EQ(callees(traces[0]), std::vector<std::string>{"__netqir__qsend_teledata"});
    EXPECT_EQ(callees(traces[1]), std::vector<std::string>{"__netqir__qrecv_teledata"});
}

TEST(Builder, TeleportMatchesTheHandWrittenForm) {
    ParseResult written = parse(testing::read_text(testing::corpus_path("teleport.nqir")));
    ASSERT_TRUE(written.ok());
    const Program built = emit_program(*teleport_builder());
    const Topology topo = Topology::direct(2);
    EXPECT_EQ(to_text(lower(built, topo)), to_text(lower(*written.program, topo)));
}

TEST(Builder, EmptyConditionalGivesEmptyThenBlock) {
    auto b = new_program();
    b->main().if_rank(b->world(), 1);
    b->main().finalize();
    ParseResult r = parse(emit_text(*b));
    ASSERT_TRUE(r.ok());
    const Function *main = r.program->entry();
    bool found = false;
    for (const auto &blk : main->blocks) {
        if (blk.label.rfind("then", 0) == 0) {
            found = true;
            ASSERT_EQ(blk.instructions.size(), 1u);
            EXPECT_EQ(blk.instructions[0].opcode, Opcode::Br);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Builder, NestedConditionalsNestBranches) {
    auto b = new_program();
    auto &outer = b->main().if_rank(b->world(), 0);
    outer.else_scope->if_rank(b->world(), 1).then_scope->x(QubitRef{0});
    b->main().finalize();
    ParseResult r = parse(emit_text(*b));
    ASSERT_TRUE(r.ok());
    int branches = 0;
    for (const auto &blk : r.program->entry()->blocks) {
        for (const auto &i : blk.instructions) branches += i.opcode == Opcode::CondBr;
    }
    EXPECT_EQ(branches, 2);
    const auto traces = trace(*r.program, 3);
    EXPECT_TRUE(traces[0].ops.size() == traces[2].ops.size());
    EXPECT_EQ(traces[1].ops.size(), traces[0].ops.size() + 1);
}

TEST(Builder, ExecutorsAgree) {
    std::vector<std::unique_ptr<ProgramBuilder>> builders;
    builders.push_back(teleport_builder());
    {
        auto b = new_program();
        const CommRef sub = b->main().comm_from_ranks({0, 2});
        b->main().scatter({0, 4}, 4, {4, 2}, 2, 0, sub, Protocol::Teledata).reduce({4, 1}, 1, {8, 2}, 2, 0, sub, Protocol::Unspecified, "cz");
        b->main().finalize();
        builders.push_back(std::move(b));
    }
    for (const auto &b : builders) {
        PrinterExecutor printer;
        emit(*b, printer);
        ProgramExecutor programmer;
        emit(*b, programmer);
        ParseResult r = parse(printer.text());
        ASSERT_TRUE(r.ok()) << printer.text();
        EXPECT_EQ(*r.program, programmer.program());
        EXPECT_EQ(print(programmer.program()), printer.text());
        EXPECT_TRUE(validate(programmer.program()).empty());
    }
}

TEST(Builder, QftProgramValidates) {
    for (int n = 1; n <= 5; ++n) {
        const Program p = qft_program(n);
        EXPECT_TRUE(validate(p).empty());
        EXPECT_EQ(print(*parse(print(p)).program), print(p));
    }
}

TEST(Builder, CallChecksTheSignature) {
    auto b = new_program();
    EXPECT_THROW(b->main().call("__netqir__qsend", {Arg::array({0, 2}), Arg::integer(1), Arg::comm(b->world())}), Error);
    EXPECT_THROW(b->main().call("__netqir__qsend", {Arg::qubit({0}), Arg::integer(1)}), Error);
    EXPECT_THROW(b->main().call("__netqir__qsend_quantum", {}), Error);
    EXPECT_NO_THROW(b->main().call("__netqir__qsend", {Arg::qubit({0}), Arg::integer(1), Arg::comm(b->world())}));
}

}  // namespace
}  // namespace netqir
