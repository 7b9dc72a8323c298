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

#include "netqir/comm.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "netqir/diagnostics.hpp"

namespace netqir {

bool CommHandle::contains(int world_rank) const {
    return std::find(members.begin(), members.end(), world_rank) != members.end();
}

CommHandle comm_world(int world_size) {
    CommHandle c;
    for (int r = 0; r < world_size; ++r) c.members.push_back(r);
    return c;
}

int comm_rank(const CommHandle &comm, Rank self) {
    auto it = std::find(comm.members.begin(), comm.members.end(), self.value);
    if (it == comm.members.end()) {
        throw Error(ErrorCode::NotAMember, "rank " + std::to_string(self.value) + " is not a member of the communicator");
    }
    return static_cast<int>(it - comm.members.begin());
}

int comm_size(const CommHandle &comm) { return static_cast<int>(comm.members.size()); }

int world_rank_of(const CommHandle &comm, int local_rank) {
    if (local_rank < 0 || local_rank >= comm_size(comm)) {
        throw Error(ErrorCode::RankOutOfRange, "rank " + std::to_string(local_rank) +
                                                   " outside communicator of size " + std::to_string(comm_size(comm)));
    }
    return comm.members[static_cast<size_t>(local_rank)];
}

GroupHandle group_from_ranks(std::span<const int> ranks, int world_size) {
    if (ranks.empty()) throw Error(ErrorCode::EmptyGroup, "group needs at least one rank");
    std::set<int> seen;
    for (int r : ranks) {
        if (r < 0 || r >= world_size) {
            throw Error(ErrorCode::RankOutOfRange,
                        "rank " + std::to_string(r) + " outside world of size " + std::to_string(world_size));
        }
        if (!seen.insert(r).second) throw Error(ErrorCode::DuplicateRank, "rank " + std::to_string(r) + " repeated");
    }
    return GroupHandle{{ranks.begin(), ranks.end()}};
}

CommHandle comm_from_group(const GroupHandle &group) { return CommHandle{group.members}; }

}  // namespace netqir
