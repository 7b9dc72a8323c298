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

#include "json.hpp"
#include "netqir/diagnostics.hpp"
#include "netqir/topology.hpp"
#include "test_support.hpp"

namespace netqir {
namespace {

using K = Topology::Kind;
using testing::kConsumedSeries;
using testing::kNeededSeries;

TEST(EpochCost, Examples) {
    EXPECT_EQ(per_epoch_cost(Strategy::Telegate, K::DirectConnected, 1), 2);
    EXPECT_EQ(per_epoch_cost(Strategy::Expose, K::DirectConnected, 2), 3);
    EXPECT_EQ(per_epoch_cost(Strategy::Expose, K::ViaCommunicator, 1), 0);
}

TEST(EpochCost, ClosedForms) {
    for (int k = 1; k <= 12; ++k) {
        EXPECT_EQ(per_epoch_cost(Strategy::Teledata, K::DirectConnected, k), 4 * k);
        EXPECT_EQ(per_epoch_cost(Strategy::Telegate, K::DirectConnected, k), 2 * k);
        EXPECT_EQ(per_epoch_cost(Strategy::Expose, K::DirectConnected, k), k + 1);
        EXPECT_EQ(per_epoch_cost(Strategy::Teledata, K::ViaCommunicator, k), 4 * (k + 1));
        EXPECT_EQ(per_epoch_cost(Strategy::Telegate, K::ViaCommunicator, k), 2 * (k + 1));
        EXPECT_EQ(per_epoch_cost(Strategy::Expose, K::ViaCommunicator, k), k >= 2 ? 2 * k : 0);
    }
}

TEST(Analyze, Examples) {
    EXPECT_EQ(analyze_qft(5, Strategy::Teledata, K::DirectConnected).consumed, 40);
    EXPECT_EQ(analyze_qft(11, Strategy::Telegate, K::ViaCommunicator).consumed, 130);
    EXPECT_EQ(analyze_qft(7, Strategy::Teledata, K::DirectConnected).needed_per_qpu, 14);
}

TEST(Analyze, EveryConsumedCoordinate) {
    int checked = 0;
    for (const auto &s : kConsumedSeries) {
        for (int n = 2; n <= 11; ++n) {
            EXPECT_EQ(analyze_qft(n, s.strategy, s.topology).consumed, s.values[n - 2])
                << to_string(s.strategy) << "/" << to_string(s.topology) << " N=" << n;
            ++checked;
        }
    }
    EXPECT_EQ(checked, 60);
}

TEST(Analyze, EveryNeededCoordinate) {
    for (const auto &s : kNeededSeries) {
        for (int n = 2; n <= 11; ++n) {
            EXPECT_EQ(analyze_qft(n, s.strategy, s.topology).needed_per_qpu, s.values[n - 2])
                << to_string(s.strategy) << "/" << to_string(s.topology) << " N=" << n;
        }
    }
    for (int n = 2; n <= 11; ++n) EXPECT_EQ(analyze_qft(n, Strategy::Expose, K::DirectConnected).needed_per_qpu, 1);
}

TEST(Analyze, ConsumedIsTheSumOverEpochs) {
    for (auto s : {Strategy::Teledata, Strategy::Telegate, Strategy::Expose}) {
        for (auto t : {K::DirectConnected, K::ViaCommunicator}) {
            for (int n = 2; n <= 20; ++n) {
                long sum = 0;
                long syncs = 0;
                for (int k = 1; k <= n - 1; ++k) {
                    sum += per_epoch_cost(s, t, k);
                    syncs += per_epoch_syncs(s, t, k);
                }
                EXPECT_EQ(analyze_qft(n, s, t).consumed, sum);
                EXPECT_EQ(analyze_qft(n, s, t).syncs, syncs);
            }
        }
    }
}

TEST(Analyze, SyncCounts) {
    // One round per remote for teledata and two for telegate; expose needs a broadcast and a parity return.
    EXPECT_EQ(per_epoch_syncs(Strategy::Expose, K::DirectConnected, 5), 2);
    EXPECT_EQ(per_epoch_syncs(Strategy::Expose, K::ViaCommunicator, 5), 2);
    EXPECT_EQ(per_epoch_syncs(Strategy::Telegate, K::DirectConnected, 3), 6);
    EXPECT_EQ(analyze_qft(2, Strategy::Telegate, K::DirectConnected).syncs, 2);
}

TEST(Analyze, ProtocolOrdering) {
    for (auto t : {K::DirectConnected, K::ViaCommunicator}) {
        for (int n = 2; n <= 30; ++n) {
            const long teledata = analyze_qft(n, Strategy::Teledata, t).consumed;
            const long telegate = analyze_qft(n, Strategy::Telegate, t).consumed;
            const long expose = analyze_qft(n, Strategy::Expose, t).consumed;
            EXPECT_GT(teledata, telegate);
            EXPECT_GE(telegate, expose);
            if (n > 2) {
                EXPECT_GT(telegate, expose);
            }
        }
    }
}

TEST(Analyze, StarReservationIsConstant) {
    for (auto s : {Strategy::Teledata, Strategy::Telegate, Strategy::Expose}) {
        const long first = analyze_qft(2, s, K::ViaCommunicator).needed_per_qpu;
        for (int n = 3; n <= 40; ++n) EXPECT_EQ(analyze_qft(n, s, K::ViaCommunicator).needed_per_qpu, first);
    }
}

TEST(Analyze, RejectsSingleQpu) {
    try {
        analyze_qft(1, Strategy::Teledata, K::DirectConnected);
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::RankOutOfRange);
    }
}

TEST(Curves, DefaultSweep) {
    const auto rows = emit_curves();
    EXPECT_EQ(rows.size(), 60u);
    for (const auto &r : rows) EXPECT_EQ(r.cost, analyze_qft(r.n_qpus, r.strategy, r.topology));
}

TEST(Curves, SingleSizeGivesSixRows) { EXPECT_EQ(emit_curves(2, 2).size(), 6u); }

TEST(Curves, Deterministic) {
    EXPECT_EQ(curves_to_csv(emit_curves()), curves_to_csv(emit_curves()));
    EXPECT_EQ(curves_to_json(emit_curves()), curves_to_json(emit_curves()));
}

TEST(Curves, CsvLayout) {
    const std::string csv = curves_to_csv(emit_curves({Strategy::Teledata}, {K::DirectConnected}, 5, 5));
    EXPECT_EQ(csv,
              "protocol,topology,n_qpus,consumed,needed_per_qpu,syncs\n"
              "teledata,direct,5,40,10,20\n");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Curves, JsonRows) {
    const auto json = nlohmann::ordered_json::parse(curves_to_json(emit_curves(2, 3)));
    ASSERT_TRUE(json.is_array());
    ASSERT_EQ(json.size(), 12u);
    const auto &row = json[0];
    std::vector<std::string> keys;
    for (auto it = row.begin(); it != row.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"protocol", "topology", "n_qpus", "consumed", "needed_per_qpu", "syncs"}));
    EXPECT_EQ(row["protocol"], "teledata");
    EXPECT_EQ(row["topology"], "direct");
    EXPECT_EQ(row["consumed"], 4);
}

TEST(Names, RoundTrip) {
    for (auto s : {Strategy::Teledata, Strategy::Telegate, Strategy::Expose}) EXPECT_EQ(strategy_from_string(to_string(s)), s);
    for (auto t : {K::DirectConnected, K::ViaCommunicator}) EXPECT_EQ(topology_kind_from_string(to_string(t)), t);
    EXPECT_FALSE(strategy_from_string("carrier-pigeon").has_value());
}

}  // namespace
}  // namespace netqir
