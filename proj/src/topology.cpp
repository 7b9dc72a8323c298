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

#include "netqir/topology.hpp"

#include <sstream>

#include "json.hpp"

#include "netqir/diagnostics.hpp"

namespace netqir {

const char *to_string(Topology::Kind k) {
    return k == Topology::Kind::DirectConnected ? "direct" : "communicator";
}

const char *to_string(Strategy s) {
    switch (s) {
        case Strategy::Teledata: return "teledata";
        case Strategy::Telegate: return "telegate";
        case Strategy::Expose: return "expose";
    }
    return "?";
}

std::optional<Topology::Kind> topology_kind_from_string(const std::string &s) {
    if (s == "direct") return Topology::Kind::DirectConnected;
    if (s == "communicator") return Topology::Kind::ViaCommunicator;
    return std::nullopt;
}

std::optional<Strategy> strategy_from_string(const std::string &s) {
    if (s == "teledata") return Strategy::Teledata;
    if (s == "telegate") return Strategy::Telegate;
    if (s == "expose") return Strategy::Expose;
    return std::nullopt;
}

long per_epoch_cost(Strategy s, Topology::Kind topology, int k) {
    const bool direct = topology == Topology::Kind::DirectConnected;
    switch (s) {
        // Teledata moves the state out and back: two EPR pairs per remote.
        case Strategy::Teledata: return direct ? 4L * k : 4L * (k + 1);
        case Strategy::Telegate: return direct ? 2L * k : 2L * (k + 1);
        case Strategy::Expose:
            if (direct) return k + 1;
            return k >= 2 ? 2L * k : 0;
    }
    return 0;
}

long per_epoch_syncs(Strategy s, Topology::Kind topology, int k) {
    const bool direct = topology == Topology::Kind::DirectConnected;
    switch (s) {
        case Strategy::Teledata:
        case Strategy::Telegate: return direct ? 2L * k : 2L * k + 2;
        case Strategy::Expose: return 2;
    }
    return 0;
}

long needed_per_qpu(Strategy s, Topology::Kind topology, int n_qpus) {
    const bool direct = topology == Topology::Kind::DirectConnected;
    switch (s) {
        case Strategy::Teledata: return direct ? 2L * n_qpus : 2;
        case Strategy::Telegate: return direct ? n_qpus : 1;
        case Strategy::Expose: return 1;
    }
    return 0;
}

CostReport analyze_qft(int n_qpus, Strategy s, Topology::Kind topology) {
    if (n_qpus < 2) throw Error(ErrorCode::RankOutOfRange, "the QFT analysis needs at least 2 QPUs");
    CostReport r;
    for (int i = 1; i <= n_qpus - 1; ++i) {
        const int k = n_qpus - i;
        r.consumed += per_epoch_cost(s, topology, k);
        r.syncs += per_epoch_syncs(s, topology, k);
    }
    r.needed_per_qpu = needed_per_qpu(s, topology, n_qpus);
    return r;
}

std::vector<CurveRow> emit_curves(const std::vector<Strategy> &strategies, const std::vector<Topology::Kind> &topologies,
                                  int n_min, int n_max) {
    std::vector<CurveRow> rows;
    for (auto t : topologies) {
        for (auto s : strategies) {
            for (int n = n_min; n <= n_max; ++n) rows.push_back(CurveRow{s, t, n, analyze_qft(n, s, t)});
        }
    }
    return rows;
}

std::vector<CurveRow> emit_curves(int n_min, int n_max) {
    return emit_curves({Strategy::Teledata, Strategy::Telegate, Strategy::Expose},
                       {Topology::Kind::DirectConnected, Topology::Kind::ViaCommunicator}, n_min, n_max);
}

std::string curves_to_csv(const std::vector<CurveRow> &rows) {
    std::ostringstream out;
    out << "protocol,topology,n_qpus,consumed,needed_per_qpu,syncs\n";
    for (const auto &r : rows) {
        out << to_string(r.strategy) << "," << to_string(r.topology) << "," << r.n_qpus << "," << r.cost.consumed << ","
            << r.cost.needed_per_qpu << "," << r.cost.syncs << "\n";
    }
    return out.str();
}

std::string curves_to_json(const std::vector<CurveRow> &rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json o;
        o["protocol"] = to_string(r.strategy);
        o["topology"] = to_string(r.topology);
        o["n_qpus"] = r.n_qpus;
        o["consumed"] = r.cost.consumed;
        o["needed_per_qpu"] = r.cost.needed_per_qpu;
        o["syncs"] = r.cost.syncs;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

}  // namespace netqir
