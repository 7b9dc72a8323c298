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

#include <set>

#include "netqir/comm.hpp"
#include "netqir/diagnostics.hpp"
#include "netqir/intrinsics.hpp"
#include "netqir/parser.hpp"
#include "netqir/validate.hpp"

namespace netqir {
namespace {

std::vector<ParamKind> params(const std::string &name) { return signature_of(name).params; }

TEST(Signature, QrecvTakesAnOutSlot) {
    EXPECT_EQ(params("__netqir__qrecv"), (std::vector<ParamKind>{ParamKind::QubitSlot, ParamKind::Int32, ParamKind::Comm}));
    EXPECT_EQ(signature_of("__netqir__qrecv").return_type, Type::void_());
}

TEST(Signature, Scatter) {
    EXPECT_EQ(params("__netqir__scatter"),
              (std::vector<ParamKind>{ParamKind::Array, ParamKind::Int32, ParamKind::Array, ParamKind::Int32,
                                      ParamKind::Int32, ParamKind::Comm}));
}

TEST(Signature, UnknownNameThrows) {
    try {
        signature_of("__netqir__bogus");
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownIntrinsic);
    }
}

TEST(Signature, TableIsClosed) {
    std::set<std::string> seen;
    for (const auto &name : all_intrinsic_names()) {
        EXPECT_TRUE(seen.insert(name).second) << name;
        EXPECT_NO_THROW(signature_of(name)) << name;
        EXPECT_TRUE(is_netqir_symbol(name));
    }
    EXPECT_EQ(seen.size(), 34u);
    EXPECT_EQ(communication_intrinsic_names().size(), 27u);
}

TEST(Signature, StateAndDatatypeFunctions) {
    EXPECT_EQ(signature_of("__netqir__comm_rank").return_type, Type::i32());
    EXPECT_EQ(signature_of("__netqir__comm_world").return_type, Type::ptr(BaseType::Comm));
    EXPECT_TRUE(signature_of("__netqir__group_from_ranks").variadic_int32);
    EXPECT_TRUE(params("__netqir__initialize").empty());
}

TEST(Comm, RankInWorldIsIdentity) { EXPECT_EQ(comm_rank(comm_world(4), Rank{2}), 2); }

TEST(Comm, RankIsPositionInMemberList) {
    const CommHandle c{{3, 1}};
    EXPECT_EQ(comm_rank(c, Rank{1}), 1);
    EXPECT_EQ(comm_rank(c, Rank{3}), 0);
}

TEST(Comm, NonMemberThrows) {
    try {
        comm_rank(CommHandle{{3, 1}}, Rank{0});
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAMember);
    }
}

TEST(Comm, Size) {
    EXPECT_EQ(comm_size(comm_world(4)), 4);
    EXPECT_EQ(comm_size(comm_world(1)), 1);
    const std::vector<int> two{0, 2};
    EXPECT_EQ(comm_size(comm_from_group(group_from_ranks(two, 4))), 2);
}

TEST(Comm, RanksAreABijection) {
    const CommHandle c{{4, 0, 2, 5}};
    std::set<int> local;
    for (int m : c.members) {
        const int r = comm_rank(c, Rank{m});
        EXPECT_GE(r, 0);
        EXPECT_LT(r, comm_size(c));
        EXPECT_EQ(world_rank_of(c, r), m);
        local.insert(r);
    }
    EXPECT_EQ(local.size(), c.members.size());
}

TEST(Group, KeepsOrderedMembers) {
    const std::vector<int> ranks{0, 2};
    EXPECT_EQ(group_from_ranks(ranks, 4).members, ranks);
}

TEST(Group, Errors) {
    auto code_of = [](std::vector<int> ranks) {
        try {
            group_from_ranks(ranks, 4);
        } catch (const Error &e) {
            return e.code();
        }
        return ErrorCode::InvalidProgram;
    };
    EXPECT_EQ(code_of({}), ErrorCode::EmptyGroup);
    EXPECT_EQ(code_of({0, 0}), ErrorCode::DuplicateRank);
    EXPECT_EQ(code_of({1, 4}), ErrorCode::RankOutOfRange);
}

std::string module(const std::string &body, const std::string &decls) {
    return "%Qubit = type opaque\n%Array = type opaque\n%Comm = type opaque\n\n"
           "define void @main() #0 {\nentry:\n" +
           body + "  ret void\n}\n\n" + decls + "\nattributes #0 = { \"entry_point\" }\n";
}

const char *kCommonDecls =
    "declare void @__netqir__initialize()\n"
    "declare void @__netqir__finalize()\n"
    "declare %Comm* @__netqir__comm_world()\n";

std::vector<Diagnostic> check(const std::string &text) {
    ParseResult r = parse(text);
    EXPECT_TRUE(r.program.has_value());
    return r.diagnostics;
}

bool has_rule(const std::vector<Diagnostic> &diags, const std::string &rule) {
    for (const auto &d : diags) {
        if (d.rule == rule) return true;
    }
    return false;
}

TEST(Validate, MatchingQsendIsClean) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend(%Qubit* null, i32 1, %Comm* %w)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n"));
    EXPECT_TRUE(diags.empty()) << (diags.empty() ? "" : to_string(diags[0]));
}

TEST(Validate, ArrayPassedToQsendIsRejected) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend(%Array* null, i32 1, %Comm* %w)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n"));
    ASSERT_FALSE(diags.empty());
    EXPECT_TRUE(has_rule(diags, rules::kTypeMismatch) || has_rule(diags, rules::kArityMismatch));
    EXPECT_EQ(diags[0].loc.line, 9);
}

TEST(Validate, CommunicationBeforeInitialize) {
    const auto diags = check(module(
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend(%Qubit* null, i32 1, %Comm* %w)\n"
        "  call void @__netqir__initialize()\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n"));
    EXPECT_TRUE(has_rule(diags, rules::kCommBeforeInitialize));
}

TEST(Validate, MissingFinalize) {
    const auto diags = check(module("  call void @__netqir__initialize()\n", kCommonDecls));
    EXPECT_TRUE(has_rule(diags, rules::kMissingFinalize));
}

TEST(Validate, UseAfterTeledataSend) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend_teledata(%Qubit* null, i32 1, %Comm* %w)\n"
        "  call void @__quantum__qis__h__body(%Qubit* null)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) +
            "declare void @__netqir__qsend_teledata(%Qubit*, i32, %Comm*)\n"
            "declare void @__quantum__qis__h__body(%Qubit*)\n"));
    EXPECT_TRUE(has_rule(diags, rules::kUseAfterSend));
}

TEST(Validate, ResetMakesAQubitUsableAgain) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend_teledata(%Qubit* null, i32 1, %Comm* %w)\n"
        "  call void @__quantum__qis__reset__body(%Qubit* null)\n"
        "  call void @__quantum__qis__h__body(%Qubit* null)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) +
            "declare void @__netqir__qsend_teledata(%Qubit*, i32, %Comm*)\n"
            "declare void @__quantum__qis__h__body(%Qubit*)\n"
            "declare void @__quantum__qis__reset__body(%Qubit*)\n"));
    EXPECT_FALSE(has_rule(diags, rules::kUseAfterSend));
}

TEST(Validate, FoldOnlyOnReduce) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__gather(%Array* null, i32 1, %Array* null, i32 2, i32 0, %Comm* %w), !fold !\"cz\"\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__gather(%Array*, i32, %Array*, i32, i32, %Comm*)\n"));
    EXPECT_TRUE(has_rule(diags, rules::kBadFold));
}

TEST(Validate, UndeclaredCallee) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  call void @__netqir__finalize()\n"
        "  call void @helper()\n",
        kCommonDecls));
    EXPECT_TRUE(has_rule(diags, rules::kUndeclaredCallee));
}

TEST(Validate, UndefinedValue) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  call void @__netqir__qsend(%Qubit* null, i32 1, %Comm* %nowhere)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n"));
    EXPECT_TRUE(has_rule(diags, rules::kUndefinedValue));
}

TEST(Validate, DiagnosticsCarryLocations) {
    const auto diags = check(module(
        "  call void @__netqir__initialize()\n"
        "  %w = call %Comm* @__netqir__comm_world()\n"
        "  call void @__netqir__qsend(%Qubit* null, i32 1)\n"
        "  call void @__netqir__finalize()\n",
        std::string(kCommonDecls) + "declare void @__netqir__qsend(%Qubit*, i32, %Comm*)\n"));
    ASSERT_TRUE(has_rule(diags, rules::kArityMismatch));
    for (const auto &d : diags) {
        EXPECT_GT(d.loc.line, 0);
        EXPECT_GT(d.loc.column, 0);
    }
}

}  // namespace
}  // namespace netqir
