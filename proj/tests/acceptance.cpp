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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "netqir/builder.hpp"
#include "netqir/intrinsics.hpp"
#include "netqir/lowering.hpp"
#include "netqir/parser.hpp"
#include "netqir/qft.hpp"
#include "netqir/simulator.hpp"
#include "netqir/topology.hpp"
#include "netqir/validate.hpp"
#include "test_support.hpp"

namespace {

using namespace netqir;
using Clock = std::chrono::steady_clock;

constexpr double kAmplitudeTol = 1e-9;
constexpr double kFidelityTol = 1e-9;
constexpr double kProbabilityTol = 1e-9;
constexpr double kCurvesSeconds = 1.0;
constexpr double kLedgerSeconds = 10.0;
constexpr double kEquivalenceSeconds = 30.0;

const std::vector<Strategy> kStrategies{Strategy::Teledata, Strategy::Telegate, Strategy::Expose};
const std::vector<Topology::Kind> kTopologies{Topology::Kind::DirectConnected, Topology::Kind::ViaCommunicator};

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string &why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::array<Amplitude, 2> random_qubit(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Amplitude a(g(rng), g(rng)), b(g(rng), g(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

Outcome fig8_reproduction() {
    Outcome out;
    const auto start = Clock::now();
    const auto rows = emit_curves();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    auto find = [&](Strategy s, Topology::Kind t, int n) -> const CurveRow * {
        for (const auto &r : rows) {
            if (r.strategy == s && r.topology == t && r.n_qpus == n) return &r;
        }
        return nullptr;
    };
    int consumed = 0, needed = 0;
    for (const auto &s : testing::kConsumedSeries) {
        for (int n = 2; n <= 11; ++n, ++consumed) {
            const CurveRow *r = find(s.strategy, s.topology, n);
            if (!r || r->cost.consumed != s.values[n - 2]) {
                out.fail(std::string("consumed ") + to_string(s.strategy) + "/" + to_string(s.topology) + " N=" +
                         std::to_string(n));
            }
        }
    }
    for (const auto &s : testing::kNeededSeries) {
        for (int n = 2; n <= 11; ++n, ++needed) {
            const CurveRow *r = find(s.strategy, s.topology, n);
            if (!r || r->cost.needed_per_qpu != s.values[n - 2]) {
                out.fail(std::string("needed ") + to_string(s.strategy) + "/" + to_string(s.topology) + " N=" +
                         std::to_string(n));
            }
        }
    }
    if (secs >= kCurvesSeconds) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass) {
        out.detail = std::to_string(consumed) + " consumed and " + std::to_string(needed) + " needed values exact";
    }
    return out;
}

Outcome ledger_cross_check() {
    Outcome out;
    const auto start = Clock::now();
    int checked = 0;
    for (int n = 2; n <= 8; ++n) {
        const Program p = qft_program(n - 1);
        for (auto s : kStrategies) {
            for (auto t : kTopologies) {
                const long got = lower(p, Topology{t, n}, options_for(s)).total_comm_qubits();
                const long want = analyze_qft(n, s, t).consumed;
                ++checked;
                if (got != want) {
                    out.fail(std::string(to_string(s)) + "/" + to_string(t) + " N=" + std::to_string(n) + ": " +
                             std::to_string(got) + " != " + std::to_string(want));
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs >= kLedgerSeconds) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass) out.detail = std::to_string(checked) + " lowered programs";
    return out;
}

Outcome qft_equivalence() {
    Outcome out;
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const Program p = qft_program(n - 1);
        SimulationOptions base;
        std::vector<QubitId> data;
        for (int r = 0; r < n; ++r) {
            base.initial.push_back({QubitId::data(r, 0), random_qubit(rng)});
            data.push_back(QubitId::data(r, 0));
        }
        const StateVector want = simulate_monolithic(p, n, base).state.extract(data);
        for (auto s : kStrategies) {
            for (auto t : kTopologies) {
                const LoweredProgram l = lower(p, Topology{t, n}, options_for(s));
                for (std::uint64_t seed : {7u, 19u}) {
                    SimulationOptions o = base;
                    o.seed = seed;
                    const double d = max_abs_diff_up_to_phase(simulate(l, o).state.extract(data), want);
                    worst = std::max(worst, d);
                    if (!(d <= kAmplitudeTol)) {
                        out.fail(std::string(to_string(s)) + "/" + to_string(t) + " N=" + std::to_string(n) +
                                 " diff " + std::to_string(d));
                    }
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs >= kEquivalenceSeconds) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "max diff %.2e over 60 runs", worst);
        out.detail = buf;
    }
    return out;
}

Program teledata_transfer() {
    auto b = new_program();
    auto &c = b->main().if_rank(b->world(), 0);
    c.then_scope->qsend(QubitRef{0}, 1, b->world(), Protocol::Teledata);
    c.else_scope->qrecv(QubitRef{0}, 0, b->world(), Protocol::Teledata);
    b->main().finalize();
    return emit_program(*b);
}

Outcome teleportation_suite() {
    Outcome out;
    const LoweredProgram l = lower(teledata_transfer(), Topology::direct(2));
    if (l.sync_points() != 1) out.fail("sync points " + std::to_string(l.sync_points()));
    std::mt19937_64 rng(99);
    double worst = 1.0;
    for (int i = 0; i < 100; ++i) {
        const auto psi = random_qubit(rng);
        SimulationOptions o;
        o.seed = static_cast<std::uint64_t>(i);
        o.initial = {{QubitId::data(0, 0), psi}};
        const SimulationResult r = simulate(l, o);
        const double f = fidelity(r.state.extract({QubitId::data(1, 0)}), StateVector{psi[0], psi[1]});
        worst = std::min(worst, f);
        if (f < 1.0 - kFidelityTol) out.fail("fidelity " + std::to_string(f) + " at trial " + std::to_string(i));
        const double p0 = 1.0 - r.state.probability_one(QubitId::data(0, 0));
        if (std::abs(p0 - 1.0) > kProbabilityTol) out.fail("sender not reset at trial " + std::to_string(i));
    }
    if (out.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "100 states, min fidelity %.12f, 1 sync", worst);
        out.detail = buf;
    }
    return out;
}

Outcome telegate_suite() {
    Outcome out;
    ParseResult parsed = parse(testing::read_text(testing::corpus_path("telegate_cz.nqir")));
    if (!parsed.ok()) {
        out.fail("corpus program does not parse");
        return out;
    }
    const Program &p = *parsed.program;
    const LoweredProgram l = lower(p, Topology::direct(2));
    if (l.sync_points() != 2) out.fail("sync points " + std::to_string(l.sync_points()));
    std::mt19937_64 rng(5);
    const std::vector<QubitId> data{QubitId::data(0, 0), QubitId::data(1, 1)};
    for (int i = 0; i < 50; ++i) {
        SimulationOptions o;
        o.seed = static_cast<std::uint64_t>(i);
        o.initial = {{data[0], random_qubit(rng)}, {data[1], random_qubit(rng)}};
        const StateVector want = simulate_monolithic(p, 2, o).state.extract(data);
        const SimulationResult r = simulate(l, o);
        const double d = max_abs_diff_up_to_phase(r.state.extract(data), want);
        if (!(d <= kAmplitudeTol)) out.fail("diff " + std::to_string(d) + " at trial " + std::to_string(i));

        // CZ is diagonal in the source's basis, so its populations must survive the protocol.
        GlobalState start(o.cap);
        start.add(data[0], o.initial[0].second[0], o.initial[0].second[1]);
        start.apply(GateKind::H, {data[0]});
        if (std::abs(start.probability_one(data[0]) - r.state.probability_one(data[0])) > kProbabilityTol) {
            out.fail("source populations changed at trial " + std::to_string(i));
        }
    }
    for (const auto &op : l.ranks[0]) {
        const bool touches_source = !op.qubits.empty() && op.qubits[0] == data[0];
        if (touches_source && (op.kind == PrimitiveOp::Kind::Measure || op.kind == PrimitiveOp::Kind::Reset)) {
            out.fail("source qubit collapsed");
        }
    }
    if (out.pass) out.detail = "50 random inputs, 2 syncs";
    return out;
}

Outcome scatter_gather_round_trip() {
    Outcome out;
    auto b = new_program();
    b->main().scatter({0, 8}, 8, {8, 2}, 2, 0, b->world(), Protocol::Teledata);
    b->main().gather({8, 2}, 2, {0, 8}, 8, 0, b->world(), Protocol::Teledata);
    b->main().finalize();
    const Program p = emit_program(*b);
    std::mt19937_64 rng(8);
    std::vector<QubitId> data;
    std::vector<std::array<Amplitude, 2>> factors;
    SimulationOptions o;
    for (int i = 0; i < 8; ++i) {
        data.push_back(QubitId::data(0, i));
        factors.push_back(random_qubit(rng));
        o.initial.push_back({data.back(), factors.back()});
    }
    const StateVector initial = tensor_product(factors);
    for (auto t : kTopologies) {
        const LoweredProgram l = lower(p, Topology{t, 4});
        for (std::uint64_t seed : {3u, 4u}) {
            o.seed = seed;
            const double d = max_abs_diff_up_to_phase(simulate(l, o).state.extract(data), initial);
            if (!(d <= kAmplitudeTol)) out.fail(std::string(to_string(t)) + " diff " + std::to_string(d));
        }
    }
    if (out.pass) out.detail = "8 qubits over 4 QPUs, both topologies";
    return out;
}

Outcome parser_corpus() {
    Outcome out;
    const auto files = testing::corpus_files();
    if (files.size() < 15) out.fail("only " + std::to_string(files.size()) + " corpus files");
    std::set<std::string> declared;
    bool teleport = false;
    for (const auto &path : files) {
        teleport = teleport || std::filesystem::path(path).filename() == "teleport.nqir";
        ParseResult first = parse(testing::read_text(path));
        if (!first.ok()) {
            out.fail(path + " does not parse");
            continue;
        }
        const std::string once = print(*first.program);
        ParseResult second = parse(once);
        if (!second.ok() || print(*second.program) != once || !(*second.program == *first.program)) {
            out.fail(path + " is not a round-trip fixed point");
        }
        for (const auto &f : first.program->functions) {
            if (f.is_declaration && is_netqir_symbol(f.name)) declared.insert(f.name);
        }
    }
    if (!teleport) out.fail("teleport program missing from the corpus");
    for (const auto &name : communication_intrinsic_names()) {
        if (!declared.count(name)) out.fail(name + " not covered by the corpus");
    }
    std::set<std::string> rebuilt;
    for (const auto &name : communication_intrinsic_names()) {
        const std::string back = intrinsic_name(classify(name));
        if (back != name) out.fail("classify(" + name + ") rebuilds " + back);
        rebuilt.insert(back);
    }
    if (rebuilt.size() != communication_intrinsic_names().size()) out.fail("classify is not injective");
    if (out.pass) {
        out.detail = std::to_string(files.size()) + " files, " + std::to_string(rebuilt.size()) + " intrinsic names";
    }
    return out;
}

Outcome negative_suite() {
    Outcome out;
    auto code_of = [](const std::function<void()> &f) -> std::optional<ErrorCode> {
        try {
            f();
        } catch (const Error &e) {
            return e.code();
        }
        return std::nullopt;
    };
    auto load = [](const std::string &name) { return parse(testing::read_text(testing::corpus_path(name))); };

    ParseResult mismatch = load("invalid/protocol_mismatch.nqir");
    if (!mismatch.ok() ||
        code_of([&] { lower(*mismatch.program, Topology::direct(2)); }) != ErrorCode::ProtocolMismatch) {
        out.fail("protocol mismatch not rejected at lowering");
    }

    ParseResult lonely = load("deadlock.nqir");
    LoweringOptions lenient;
    lenient.allow_unmatched = true;
    if (!lonely.ok() ||
        code_of([&] { simulate(lower(*lonely.program, Topology::direct(2), lenient)); }) != ErrorCode::Deadlock) {
        out.fail("send without receive does not deadlock");
    }

    auto located = [&](const std::string &file, const char *rule) {
        ParseResult r = load(file);
        for (const auto &d : r.diagnostics) {
            if (d.rule == rule && d.loc.line > 0 && d.loc.column > 0) return true;
        }
        return false;
    };
    if (!located("invalid/unknown_intrinsic.nqir", rules::kUnknownIntrinsic)) out.fail("unknown intrinsic not located");
    if (!located("invalid/arity_mismatch.nqir", rules::kArityMismatch)) out.fail("arity mismatch not located");
    if (out.pass) out.detail = "mismatch, deadlock, unknown intrinsic, arity";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"cost curves reproduce every plotted value", fig8_reproduction},
        {"lowered QFT ledger equals analyzer", ledger_cross_check},
        {"distributed QFT equals monolithic QFT", qft_equivalence},
        {"teledata teleportation properties", teleportation_suite},
        {"telegate remote CZ properties", telegate_suite},
        {"scatter then gather restores the state", scatter_gather_round_trip},
        {"parser corpus round trip and classification", parser_corpus},
        {"negative programs are rejected", negative_suite},
    };
    int failures = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
