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

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netqir/topology.hpp"

namespace netqir::testing {

inline std::string corpus_path(const std::string &name) { return std::string(NETQIR_CORPUS_DIR) + "/" + name; }

inline std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Every valid `.nqir` file of the corpus, sorted by name.
inline std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::directory_iterator(NETQIR_CORPUS_DIR)) {
        if (e.is_regular_file() && e.path().extension() == ".nqir") out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct CostSeries {
    Strategy strategy;
    Topology::Kind topology;
    std::array<long, 10> values;  // N = 2..11
};

using K = Topology::Kind;

// Communication qubits consumed by the distributed QFT, as plotted.
inline const std::vector<CostSeries> kConsumedSeries = {
    {Strategy::Teledata, K::DirectConnected, {4, 12, 24, 40, 60, 84, 112, 144, 180, 220}},
    {Strategy::Telegate, K::DirectConnected, {2, 6, 12, 20, 30, 42, 56, 72, 90, 110}},
    {Strategy::Expose, K::DirectConnected, {2, 5, 9, 14, 20, 27, 35, 44, 54, 65}},
    {Strategy::Teledata, K::ViaCommunicator, {8, 20, 36, 56, 80, 108, 140, 176, 216, 260}},
    {Strategy::Telegate, K::ViaCommunicator, {4, 10, 18, 28, 40, 54, 70, 88, 108, 130}},
    {Strategy::Expose, K::ViaCommunicator, {0, 4, 10, 18, 28, 40, 54, 70, 88, 108}},
};

// Communication qubits each QPU reserves, as plotted (Expose over the
// direct topology is not plotted).
inline const std::vector<CostSeries> kNeededSeries = {
    {Strategy::Teledata, K::DirectConnected, {4, 6, 8, 10, 12, 14, 16, 18, 20, 22}},
    {Strategy::Telegate, K::DirectConnected, {2, 3, 4, 5, 6, 7, 8, 9, 10, 11}},
    {Strategy::Telegate, K::ViaCommunicator, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}},
    {Strategy::Expose, K::ViaCommunicator, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}},
    {Strategy::Teledata, K::ViaCommunicator, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
};

}  // namespace netqir::testing
