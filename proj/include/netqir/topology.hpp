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
#include <vector>

namespace netqir {

/// Physical interconnect between QPUs.
struct Topology {
    enum class Kind { DirectConnected, ViaCommunicator };

    Kind kind = Kind::DirectConnected;
    int qpus = 2;

    /// Index of the relay node under ViaCommunicator (one past the last
    /// compute rank), -1 otherwise.
    int relay() const { return kind == Kind::ViaCommunicator ? qpus : -1; }

    static Topology direct(int qpus) { return {Kind::DirectConnected, qpus}; }
    static Topology communicator(int qpus) { return {Kind::ViaCommunicator, qpus}; }
};

/// How a QFT epoch shares its control qubit.
enum class Strategy { Teledata, Telegate, Expose };

const char *to_string(Topology::Kind k);
const char *to_string(Strategy s);
std::optional<Topology::Kind> topology_kind_from_string(const std::string &s);
std::optional<Strategy> strategy_from_string(const std::string &s);

struct CostReport {
    long consumed = 0;
    long needed_per_qpu = 0;
    long syncs = 0;

    friend bool operator==(const CostReport &, const CostReport &) = default;
};

/// Communication qubits consumed by one epoch with `k` remote participants.
long per_epoch_cost(Strategy s, Topology::Kind topology, int k);
/// Synchronizations of one epoch with `k` remote participants.
long per_epoch_syncs(Strategy s, Topology::Kind topology, int k);
/// Communication qubits each QPU must reserve.
long needed_per_qpu(Strategy s, Topology::Kind topology, int n_qpus);

/// Cost of the distributed QFT over `n_qpus` QPUs (n_qpus - 1 epochs).
/// Throws Error(RankOutOfRange) if n_qpus < 2.
CostReport analyze_qft(int n_qpus, Strategy s, Topology::Kind topology);

struct CurveRow {
    Strategy strategy = Strategy::Teledata;
    Topology::Kind topology = Topology::Kind::DirectConnected;
    int n_qpus = 2;
    CostReport cost;
};

/// Rows ordered by topology, then strategy, then N.
std::vector<CurveRow> emit_curves(const std::vector<Strategy> &strategies, const std::vector<Topology::Kind> &topologies,
                                  int n_min, int n_max);
std::vector<CurveRow> emit_curves(int n_min = 2, int n_max = 11);

std::string curves_to_csv(const std::vector<CurveRow> &rows);
std::string curves_to_json(const std::vector<CurveRow> &rows);

}  // namespace netqir
