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

#include "netqir/qft.hpp"

#include <cmath>
#include <numbers>

#include "netqir/builder.hpp"

namespace netqir {

Program qft_program(int n) {
    if (n < 1) throw Error(ErrorCode::RankOutOfRange, "qft_program needs n >= 1");
    auto builder = new_program();
    Scope &main = builder->main();
    const CommRef world = builder->world();
    const QubitRef x{kQftDataAddress};
    const QubitRef ref{kQftReferenceAddress};

    std::vector<CommRef> epochs;
    for (int i = 1; i <= n; ++i) {
        std::vector<int> members;
        for (int r = i - 1; r <= n; ++r) members.push_back(r);
        epochs.push_back(main.comm_from_ranks(members));
    }

    for (int i = 1; i <= n; ++i) {
        const int root = i - 1;
        Scope *scope = &main;
        for (int r = root; r <= n; ++r) {
            auto &cond = scope->if_rank(world, r);
            Scope &body = *cond.then_scope;
            if (r == root) {
                body.h(x).expose(x, 0, epochs[i - 1]);
            } else {
                const double theta = std::numbers::pi / std::pow(2.0, r - root);
                body.expose(ref, 0, epochs[i - 1]).cp(theta, ref, x);
            }
            scope = cond.else_scope.get();
        }
    }
    main.if_rank(world, n).then_scope->h(x);
    main.finalize();
    return emit_program(*builder);
}

StateVector dft(const StateVector &input) {
    const size_t n = input.size();
    StateVector out(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (size_t k = 0; k < n; ++k) {
        Amplitude acc{};
        for (size_t j = 0; j < n; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            acc += input[j] * std::polar(1.0, angle);
        }
        out[k] = acc * s;
    }
    return out;
}

StateVector bit_reverse(const StateVector &v) {
    size_t bits = 0;
    while ((size_t{1} << bits) < v.size()) ++bits;
    StateVector out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        size_t r = 0;
        for (size_t b = 0; b < bits; ++b) {
            if (i & (size_t{1} << b)) r |= size_t{1} << (bits - 1 - b);
        }
        out[r] = v[i];
    }
    return out;
}

}  // namespace netqir
