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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "netqir/lowering.hpp"
#include "netqir/parser.hpp"
#include "netqir/qft.hpp"
#include "netqir/simulator.hpp"
#include "netqir/topology.hpp"
#include "netqir/trace.hpp"
#include "netqir/validate.hpp"

namespace {

using namespace netqir;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct RunConfig {
    std::string input;
    std::string output;
    std::string topology = "direct";
    std::string protocol = "auto";
    std::string format = "text";
    std::string circuit = "qft";
    int qpus = 0;
    std::uint64_t seed = 0;
    bool full_state = false;
    bool ideal = false;
    bool allow_unmatched = false;
    bool quiet = false;
    int n_min = 2;
    int n_max = 11;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const RunConfig &cfg, const std::string &text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw UsageError("cannot write " + cfg.output);
    out << text;
}

void print_diagnostics(const std::vector<Diagnostic> &diags, const std::string &path) {
    for (const auto &d : diags) std::cerr << path << ":" << d << "\n";
}

/// Parses the input file; prints diagnostics. Empty optional means errors.
std::optional<Program> load(const RunConfig &cfg) {
    ParseResult r = parse(read_file(cfg.input));
    print_diagnostics(r.diagnostics, cfg.input);
    if (!r.ok()) return std::nullopt;
    return std::move(*r.program);
}

Topology::Kind topology_of(const RunConfig &cfg) {
    auto k = topology_kind_from_string(cfg.topology);
    if (!k) throw UsageError("unknown topology '" + cfg.topology + "'");
    return *k;
}

LoweringOptions lowering_options(const RunConfig &cfg) {
    LoweringOptions opts;
    if (cfg.protocol != "auto") {
        auto s = strategy_from_string(cfg.protocol);
        if (!s) throw UsageError("unknown protocol '" + cfg.protocol + "'");
        opts = options_for(*s);
    }
    opts.allow_unmatched = cfg.allow_unmatched;
    return opts;
}

LoweredProgram lower_input(const Program &program, const RunConfig &cfg) {
    const int world = cfg.qpus > 0 ? cfg.qpus : infer_world_size(program);
    if (cfg.ideal) return lower_ideal(program, world, lowering_options(cfg));
    return lower(program, Topology{topology_of(cfg), world}, lowering_options(cfg));
}

int cmd_parse(const RunConfig &cfg) {
    auto program = load(cfg);
    if (!program) return kExitDiagnostics;
    write_output(cfg, print(*program));
    return kExitOk;
}

int cmd_validate(const RunConfig &cfg) {
    auto program = load(cfg);
    if (!program) return kExitDiagnostics;
    if (!cfg.quiet) std::cout << cfg.input << ": ok\n";
    return kExitOk;
}

int cmd_lower(const RunConfig &cfg) {
    auto program = load(cfg);
    if (!program) return kExitDiagnostics;
    write_output(cfg, to_text(lower_input(*program, cfg)));
    return kExitOk;
}

std::string format_rows(const std::vector<CurveRow> &rows, const std::string &format) {
    if (format == "csv") return curves_to_csv(rows);
    if (format == "json") return curves_to_json(rows) + "\n";
    std::ostringstream out;
    for (const auto &r : rows) {
        out << "protocol=" << to_string(r.strategy) << " topology=" << to_string(r.topology) << " n_qpus=" << r.n_qpus
            << " consumed=" << r.cost.consumed << " needed_per_qpu=" << r.cost.needed_per_qpu
            << " syncs=" << r.cost.syncs << "\n";
    }
    return out.str();
}

int cmd_analyze(const RunConfig &cfg) {
    if (cfg.circuit != "qft") throw UsageError("unknown circuit '" + cfg.circuit + "'");
    if (cfg.protocol == "auto") throw UsageError("analyze needs an explicit --protocol");
    if (cfg.qpus < 2) throw UsageError("analyze needs --qpus >= 2");
    auto s = strategy_from_string(cfg.protocol);
    if (!s) throw UsageError("unknown protocol '" + cfg.protocol + "'");
    const auto rows = emit_curves({*s}, {topology_of(cfg)}, cfg.qpus, cfg.qpus);
    write_output(cfg, format_rows(rows, cfg.format));
    return kExitOk;
}

int cmd_curves(const RunConfig &cfg) {
    if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) throw UsageError("need 2 <= --min <= --max");
    write_output(cfg, format_rows(emit_curves(cfg.n_min, cfg.n_max), cfg.format == "text" ? "csv" : cfg.format));
    return kExitOk;
}

std::string format_amplitude(Amplitude a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.9f%+.9fi", a.real(), a.imag());
    return buf;
}

int cmd_simulate(const RunConfig &cfg) {
    auto program = load(cfg);
    if (!program) return kExitDiagnostics;
    const LoweredProgram lowered = lower_input(*program, cfg);
    SimulationOptions opts;
    opts.seed = cfg.seed;
    SimulationResult result;
    try {
        result = simulate(lowered, opts);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    std::set<QubitId> data;
    for (const auto &stream : lowered.ranks) {
        for (const auto &op : stream) {
            for (const auto &q : op.qubits) {
                if (q.space == QubitId::Space::Data) data.insert(q);
            }
        }
    }

    std::ostringstream out;
    for (const auto &line : result.transcript) out << line << "\n";
    out << "final state: " << result.state.live() << " live qubits, " << result.steps << " steps\n";
    for (const auto &q : data) {
        out << "  " << to_string(q) << " p1=" << std::fixed << std::setprecision(9)
            << result.state.probability_one(q) << "\n";
    }
    if (cfg.full_state) {
        const auto &order = result.state.order();
        out << "amplitudes:";
        for (auto it = order.rbegin(); it != order.rend(); ++it) out << " " << to_string(*it);
        out << "\n";
        const auto &amps = result.state.amplitudes();
        for (size_t i = 0; i < amps.size(); ++i) {
            std::string label;
            for (size_t b = order.size(); b-- > 0;) label += ((i >> b) & 1) ? '1' : '0';
            out << "  |" << label << "> " << format_amplitude(amps[i]) << "\n";
        }
    }
    write_output(cfg, out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"netqir: parse, validate, lower, analyze and simulate distributed quantum programs"};
    app.require_subcommand(1);
    RunConfig cfg;

    const std::vector<std::string> topologies{"direct", "communicator"};
    const std::vector<std::string> protocols{"auto", "teledata", "telegate", "expose"};

    auto add_input = [&](CLI::App *sub) { sub->add_option("input", cfg.input, "NetQIR source file")->required(); };
    auto add_output = [&](CLI::App *sub) { sub->add_option("-o,--output", cfg.output, "Write to this file"); };
    auto add_lowering = [&](CLI::App *sub) {
        sub->add_option("--qpus", cfg.qpus, "World size (default: inferred from the program)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--topology", cfg.topology)->check(CLI::IsMember(topologies));
        sub->add_option("--protocol", cfg.protocol)->check(CLI::IsMember(protocols));
        sub->add_flag("--ideal", cfg.ideal, "Use the monolithic lowering");
        sub->add_flag("--allow-unmatched", cfg.allow_unmatched, "Lower sends or receives without a partner");
    };

    auto *parse_cmd = app.add_subcommand("parse", "Print the canonical form of a program");
    add_input(parse_cmd);
    add_output(parse_cmd);

    auto *validate_cmd = app.add_subcommand("validate", "Report diagnostics");
    add_input(validate_cmd);
    validate_cmd->add_flag("-q,--quiet", cfg.quiet);

    auto *lower_cmd = app.add_subcommand("lower", "Compile communication into primitive operations");
    add_input(lower_cmd);
    add_output(lower_cmd);
    add_lowering(lower_cmd);

    auto *analyze_cmd = app.add_subcommand("analyze", "Communication cost of a circuit");
    analyze_cmd->add_option("--circuit", cfg.circuit)->check(CLI::IsMember({"qft"}));
    analyze_cmd->add_option("--qpus", cfg.qpus)->required();
    analyze_cmd->add_option("--protocol", cfg.protocol)->required()->check(CLI::IsMember(protocols));
    analyze_cmd->add_option("--topology", cfg.topology)->check(CLI::IsMember(topologies));
    analyze_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "csv", "json"}));
    add_output(analyze_cmd);

    auto *simulate_cmd = app.add_subcommand("simulate", "Run a lowered program on the state vector simulator");
    add_input(simulate_cmd);
    add_output(simulate_cmd);
    add_lowering(simulate_cmd);
    simulate_cmd->add_option("--seed", cfg.seed);
    simulate_cmd->add_flag("--full-state", cfg.full_state, "Dump every amplitude");

    auto *curves_cmd = app.add_subcommand("curves", "QFT cost sweep over every protocol and topology");
    curves_cmd->add_option("--min", cfg.n_min);
    curves_cmd->add_option("--max", cfg.n_max);
    curves_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "csv", "json"}));
    add_output(curves_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    // Sends without a partner should reach the simulator and show up as a deadlock.
    if (simulate_cmd->parsed()) cfg.allow_unmatched = true;

    try {
        if (parse_cmd->parsed()) return cmd_parse(cfg);
        if (validate_cmd->parsed()) return cmd_validate(cfg);
        if (lower_cmd->parsed()) return cmd_lower(cfg);
        if (analyze_cmd->parsed()) return cmd_analyze(cfg);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg);
        if (curves_cmd->parsed()) return cmd_curves(cfg);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::Deadlock:
            case ErrorCode::CapacityExceeded:
            case ErrorCode::NormDrift:
                return kExitRuntime;
            default:
                return kExitDiagnostics;
        }
    }
    return kExitUsage;
}
