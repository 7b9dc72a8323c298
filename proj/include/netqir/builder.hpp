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

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "netqir/intrinsics.hpp"
#include "netqir/ir.hpp"

namespace netqir {

/// Static qubit address on the executing rank.
struct QubitRef {
    std::int64_t address = 0;
};

/// Contiguous run of static qubit addresses.
struct QubitArrayRef {
    std::int64_t base = 0;
    int length = 0;
};

/// Classical bit buffer (`i1*`) on the executing rank.
struct BitsRef {
    std::int64_t address = 0;
};

/// Communicator value inside a builder program. Id 0 is comm_world.
struct CommRef {
    int id = 0;
};

struct GroupRef {
    int id = 0;
};

/// Argument of an intrinsic call. Slot variants are the `**` receive forms.
struct Arg {
    enum class Kind { Qubit, QubitSlot, Array, ArraySlot, Bits, Int, Comm, Group };
    Kind kind = Kind::Int;
    std::int64_t value = 0;  ///< address, integer, or comm/group id

    static Arg qubit(QubitRef q) { return {Kind::Qubit, q.address}; }
    static Arg qubit_slot(QubitRef q) { return {Kind::QubitSlot, q.address}; }
    static Arg array(QubitArrayRef a) { return {Kind::Array, a.base}; }
    static Arg array_slot(QubitArrayRef a) { return {Kind::ArraySlot, a.base}; }
    static Arg bits(BitsRef b) { return {Kind::Bits, b.address}; }
    static Arg integer(std::int64_t v) { return {Kind::Int, v}; }
    static Arg comm(CommRef c) { return {Kind::Comm, c.id}; }
    static Arg group(GroupRef g) { return {Kind::Group, g.id}; }
};

class Scope;

struct GateOperation {
    GateKind gate = GateKind::H;
    std::vector<QubitRef> qubits;
    double theta = 0.0;
};

struct MeasureOperation {
    QubitRef qubit;
    std::int64_t result = 0;
};

struct ResetOperation {
    QubitRef qubit;
};

struct IntrinsicOperation {
    std::string name;
    std::vector<Arg> args;
    std::optional<std::string> fold;
    int defines_comm = -1;   ///< comm id produced by comm_from_group
    int defines_group = -1;  ///< group id produced by group_from_ranks
};

struct RankConditionalOperation {
    CommRef comm;
    int rank = 0;
    std::unique_ptr<Scope> then_scope;
    std::unique_ptr<Scope> else_scope;
};

using Operation = std::variant<GateOperation, MeasureOperation, ResetOperation, IntrinsicOperation, RankConditionalOperation>;

class ProgramBuilder;

/// Ordered list of operations. Nested scopes come from rank conditionals.
class Scope {
  public:
    Scope(ProgramBuilder *owner, Scope *parent) : owner_(owner), parent_(parent) {}
    Scope(const Scope &) = delete;
    Scope &operator=(const Scope &) = delete;

    Scope &h(QubitRef q);
    Scope &x(QubitRef q);
    Scope &z(QubitRef q);
    Scope &cnot(QubitRef control, QubitRef target);
    Scope &cz(QubitRef a, QubitRef b);
    Scope &cp(double theta, QubitRef a, QubitRef b);
    Scope &measure(QubitRef q, std::int64_t result);
    Scope &reset(QubitRef q);

    /// Any `__netqir__` communication call. Arguments are checked against
    /// the signature table; throws Error(InvalidProgram) on mismatch.
    Scope &call(const std::string &intrinsic, std::vector<Arg> args, std::optional<std::string> fold = std::nullopt);

    Scope &qsend(QubitRef q, int dest, CommRef comm, Protocol p = Protocol::Unspecified);
    Scope &qrecv(QubitRef slot, int source, CommRef comm, Protocol p = Protocol::Unspecified);
    Scope &qsend_array(QubitArrayRef a, int dest, CommRef comm, Protocol p = Protocol::Unspecified);
    Scope &qrecv_array(QubitArrayRef slot, int source, CommRef comm, Protocol p = Protocol::Unspecified);
    Scope &measure_send(QubitRef q, int dest, CommRef comm);
    Scope &measure_recv(BitsRef bits, int count, int source, CommRef comm);
    Scope &expose(QubitRef q, int root, CommRef comm);
    Scope &expose_array(QubitArrayRef a, int root, CommRef comm);
    Scope &scatter(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                   Protocol p = Protocol::Unspecified);
    Scope &gather(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                  Protocol p = Protocol::Unspecified);
    Scope &reduce(QubitArrayRef send, int sendcount, QubitArrayRef recv, int recvcount, int root, CommRef comm,
                  Protocol p = Protocol::Unspecified, std::optional<std::string> fold = std::nullopt);

    /// group_from_ranks followed by comm_from_group.
    CommRef comm_from_ranks(const std::vector<int> &world_ranks);

    /// Operations added to the returned pair of scopes run only when
    /// comm_rank(comm) == rank (then) or otherwise (else).
    RankConditionalOperation &if_rank(CommRef comm, int rank);

    Scope &finalize();

    const std::vector<Operation> &operations() const { return ops_; }
    const Scope *parent() const { return parent_; }

  private:
    ProgramBuilder *owner_;
    Scope *parent_;
    std::vector<Operation> ops_;
};

/// Root of a scope tree plus the world communicator.
class ProgramBuilder {
  public:
    ProgramBuilder();
    ProgramBuilder(const ProgramBuilder &) = delete;
    ProgramBuilder &operator=(const ProgramBuilder &) = delete;

    Scope &main() { return *main_; }
    const Scope &main() const { return *main_; }
    CommRef world() const { return CommRef{0}; }

  private:
    friend class Scope;
    int next_comm_ = 1;
    int next_group_ = 0;
    std::unique_ptr<Scope> main_;
};

/// Main scope holding an initialize operation, with the world communicator.
std::unique_ptr<ProgramBuilder> new_program();

/// Child scope that runs only on the given rank of `comm`.
Scope &rank_conditional(Scope &scope, CommRef comm, int rank_value);

/// Receives the walk over a finished scope tree.
class Executor {
  public:
    virtual ~Executor() = default;
    virtual void opaque_type(const std::string &name) = 0;
    virtual void begin_function(const Function &header) = 0;
    virtual void label(const std::string &name) = 0;
    virtual void instruction(const Instruction &inst) = 0;
    virtual void end_function() = 0;
    virtual void declaration(const Function &decl) = 0;
    virtual void finish() = 0;
};

/// Writes NetQIR text as the walk proceeds.
class PrinterExecutor : public Executor {
  public:
    void opaque_type(const std::string &name) override;
    void begin_function(const Function &header) override;
    void label(const std::string &name) override;
    void instruction(const Instruction &inst) override;
    void end_function() override;
    void declaration(const Function &decl) override;
    void finish() override;

    const std::string &text() const { return text_; }

  private:
    std::string text_;
    bool any_function_ = false;
    bool last_was_declaration_ = false;
};

/// Builds an in-memory Program.
class ProgramExecutor : public Executor {
  public:
    void opaque_type(const std::string &name) override;
    void begin_function(const Function &header) override;
    void label(const std::string &name) override;
    void instruction(const Instruction &inst) override;
    void end_function() override;
    void declaration(const Function &decl) override;
    void finish() override {}

    const Program &program() const { return program_; }

  private:
    Program program_;
    Function current_;
};

/// Walks the scope tree into `executor`. Throws Error(UnterminatedProgram)
/// when the main scope does not end with finalize.
void emit(const ProgramBuilder &builder, Executor &executor);

std::string emit_text(const ProgramBuilder &builder);
Program emit_program(const ProgramBuilder &builder);

}  // namespace netqir
