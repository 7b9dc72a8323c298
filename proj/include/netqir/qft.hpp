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

#include "netqir/ir.hpp"
#include "netqir/state.hpp"

namespace netqir {

/// Address of the data qubit x_r on rank r.
inline constexpr std::int64_t kQftDataAddress = 0;
/// Address where non-root ranks hold the exposed reference.
inline constexpr std::int64_t kQftReferenceAddress = 1;

/// Distributed QFT over n+1 ranks, one data qubit per rank. Epoch i
/// (1..n) applies H to x_{i-1} on rank i-1, exposes it over ranks
/// [i-1, n], and each rank j >= i applies CP(pi / 2^(j-i+1)) between the
/// reference and x_j. Rank n ends with H on x_n. Throws Error(RankOutOfRange)
/// if n < 1.
Program qft_program(int n);

/// Unitary DFT over 2^m amplitudes applied to `input`.
StateVector dft(const StateVector &input);

/// Reverses the bit order of every index (the QFT without final swaps
/// leaves its output in this order).
StateVector bit_reverse(const StateVector &v);

}  // namespace netqir
