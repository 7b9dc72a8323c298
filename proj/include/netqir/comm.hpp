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

#include <span>
#include <vector>

namespace netqir {

/// Process index within comm_world.
struct Rank {
    int value = 0;

    friend auto operator<=>(const Rank &, const Rank &) = default;
};

/// Ordered, duplicate-free set of world ranks.
struct GroupHandle {
    std::vector<int> members;

    friend bool operator==(const GroupHandle &, const GroupHandle &) = default;
};

/// Communicator over an ordered list of world ranks. A process's rank inside
/// the communicator is its position in `members`.
struct CommHandle {
    std::vector<int> members;

    bool contains(int world_rank) const;

    friend bool operator==(const CommHandle &, const CommHandle &) = default;
};

CommHandle comm_world(int world_size);

/// Index of `self` within `comm`. Throws Error(NotAMember).
int comm_rank(const CommHandle &comm, Rank self);
int comm_size(const CommHandle &comm);

/// World rank of the process at position `local_rank` of `comm`.
/// Throws Error(RankOutOfRange).
int world_rank_of(const CommHandle &comm, int local_rank);

/// Throws Error(EmptyGroup | DuplicateRank | RankOutOfRange).
GroupHandle group_from_ranks(std::span<const int> ranks, int world_size);
CommHandle comm_from_group(const GroupHandle &group);

}  // namespace netqir
