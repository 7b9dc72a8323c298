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

#include "netqir/state.hpp"

#include <array>
#include <cmath>

#include "netqir/diagnostics.hpp"

namespace netqir {

GlobalState::GlobalState(size_t cap) : cap_(cap), amps_{Amplitude(1.0, 0.0)} {}

int GlobalState::classical_value(const QubitId &q) const {
    auto it = classical_.find(q);
    return it == classical_.end() ? 0 : it->second;
}

void GlobalState::add(const QubitId &q, Amplitude a0, Amplitude a1) {
    if (is_live(q)) throw Error(ErrorCode::InvalidProgram, "qubit " + to_string(q) + " is already live");
    if (order_.size() + 1 > cap_) {
        throw Error(ErrorCode::CapacityExceeded,
                    "simulation needs more than " + std::to_string(cap_) + " live qubits (adding " + to_string(q) + ")");
    }
    const size_t n = amps_.size();
    StateVector next(2 * n);
    for (size_t i = 0; i < n; ++i) {
        next[i] = amps_[i] * a0;
        next[i + n] = amps_[i] * a1;
    }
    amps_ = std::move(next);
    pos_[q] = order_.size();
    order_.push_back(q);
    classical_.erase(q);
}

size_t GlobalState::ensure(const QubitId &q) {
    auto it = pos_.find(q);
    if (it != pos_.end()) return it->second;
    const int v = classical_value(q);
    add(q, v ? 0.0 : 1.0, v ? 1.0 : 0.0);
    return pos_.at(q);
}

void GlobalState::apply(GateKind g, const std::vector<QubitId> &qubits, double theta) {
    if (static_cast<int>(qubits.size()) != gate_arity(g)) throw Error(ErrorCode::InvalidProgram, "wrong gate arity");
    std::vector<size_t> bits;
    for (const auto &q : qubits) bits.push_back(ensure(q));
    if (bits.size() == 2 && bits[0] == bits[1]) throw Error(ErrorCode::InvalidProgram, "gate operands coincide");
    const size_t n = amps_.size();
    const size_t m0 = size_t{1} << bits[0];
    switch (g) {
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            for (size_t i = 0; i < n; ++i) {
                if (i & m0) continue;
                const Amplitude a = amps_[i], b = amps_[i | m0];
                amps_[i] = s * (a + b);
                amps_[i | m0] = s * (a - b);
            }
            break;
        }
        case GateKind::X:
            for (size_t i = 0; i < n; ++i) {
                if (!(i & m0)) std::swap(amps_[i], amps_[i | m0]);
            }
            break;
        case GateKind::Z:
            for (size_t i = 0; i < n; ++i) {
                if (i & m0) amps_[i] = -amps_[i];
            }
            break;
        case GateKind::CNOT: {
            const size_t m1 = size_t{1} << bits[1];
            for (size_t i = 0; i < n; ++i) {
                if ((i & m0) && !(i & m1)) std::swap(amps_[i], amps_[i | m1]);
            }
            break;
        }
        case GateKind::CZ:
        case GateKind::CP: {
            const size_t m1 = size_t{1} << bits[1];
            const Amplitude phase = g == GateKind::CZ ? Amplitude(-1.0, 0.0) : std::polar(1.0, theta);
            for (size_t i = 0; i < n; ++i) {
                if ((i & m0) && (i & m1)) amps_[i] *= phase;
            }
            break;
        }
        case GateKind::SWAP: {
            const size_t m1 = size_t{1} << bits[1];
            for (size_t i = 0; i < n; ++i) {
                if ((i & m0) && !(i & m1)) std::swap(amps_[i], amps_[(i & ~m0) | m1]);
            }
            break;
        }
    }
}

double GlobalState::probability_one(const QubitId &q) const {
    auto it = pos_.find(q);
    if (it == pos_.end()) return classical_value(q);
    const size_t m = size_t{1} << it->second;
    double p = 0.0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & m) p += std::norm(amps_[i]);
    }
    return p;
}

int GlobalState::measure(const QubitId &q, double u) {
    if (!is_live(q)) return classical_value(q);
    const double p1 = probability_one(q);
    const double total = norm() * norm();
    const int outcome = u * total < p1 ? 1 : 0;
    remove(q, outcome);
    return outcome;
}

void GlobalState::reset(const QubitId &q, double u) {
    if (is_live(q)) measure(q, u);
    classical_[q] = 0;
}

void GlobalState::remove(const QubitId &q, int value) {
    const size_t p = pos_.at(q);
    const size_t m = size_t{1} << p;
    const size_t low = m - 1;
    StateVector next(amps_.size() / 2);
    double norm2 = 0.0;
    for (size_t j = 0; j < next.size(); ++j) {
        const size_t i = ((j & ~low) << 1) | (j & low) | (value ? m : 0);
        next[j] = amps_[i];
        norm2 += std::norm(next[j]);
    }
    if (norm2 <= 0.0) throw Error(ErrorCode::NormDrift, "measurement outcome with zero probability on " + to_string(q));
    const double s = 1.0 / std::sqrt(norm2);
    for (auto &a : next) a *= s;
    amps_ = std::move(next);
    order_.erase(order_.begin() + static_cast<long>(p));
    pos_.erase(q);
    for (auto &[id, pp] : pos_) {
        if (pp > p) --pp;
    }
    classical_[q] = value;
}

void GlobalState::alloc_entangled(const std::vector<QubitId> &qubits) {
    for (const auto &q : qubits) add(q, 1.0, 0.0);
    apply(GateKind::H, {qubits[0]});
    for (size_t k = 1; k < qubits.size(); ++k) apply(GateKind::CNOT, {qubits[0], qubits[k]});
}

double GlobalState::norm() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

StateVector GlobalState::extract(const std::vector<QubitId> &subset, double tolerance) const {
    // Live members of the subset, with their bit position in the output.
    std::vector<std::pair<size_t, size_t>> live_bits;  // (state position, output bit)
    size_t classical_mask = 0;
    const size_t k = subset.size();
    for (size_t s = 0; s < k; ++s) {
        const size_t out_bit = k - 1 - s;
        auto it = pos_.find(subset[s]);
        if (it != pos_.end()) {
            live_bits.push_back({it->second, out_bit});
        } else if (classical_value(subset[s])) {
            classical_mask |= size_t{1} << out_bit;
        }
    }
    size_t subset_mask = 0;
    for (auto [p, o] : live_bits) subset_mask |= size_t{1} << p;

    // Group amplitudes by the configuration of the remaining qubits.
    std::map<size_t, StateVector> columns;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (std::norm(amps_[i]) == 0.0) continue;
        size_t out = classical_mask;
        for (auto [p, o] : live_bits) {
            if (i & (size_t{1} << p)) out |= size_t{1} << o;
        }
        auto &col = columns[i & ~subset_mask];
        if (col.empty()) col.assign(size_t{1} << k, Amplitude{});
        col[out] = amps_[i];
    }
    if (columns.empty()) throw Error(ErrorCode::NormDrift, "state vector is zero");
    const StateVector *best = nullptr;
    double best_norm = -1.0;
    for (const auto &[rest, col] : columns) {
        double n2 = 0.0;
        for (const auto &a : col) n2 += std::norm(a);
        if (n2 > best_norm) {
            best_norm = n2;
            best = &col;
        }
    }
    StateVector v = *best;
    const double s = 1.0 / std::sqrt(best_norm);
    for (auto &a : v) a *= s;
    double residual = 0.0;
    for (const auto &[rest, col] : columns) {
        Amplitude c{};
        for (size_t i = 0; i < v.size(); ++i) c += std::conj(v[i]) * col[i];
        for (size_t i = 0; i < v.size(); ++i) residual += std::norm(col[i] - c * v[i]);
    }
    if (residual > tolerance) {
        throw Error(ErrorCode::MismatchedSubset, "the requested qubits are entangled with the rest of the state");
    }
    return v;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) throw Error(ErrorCode::MismatchedSubset, "states have different dimensions");
    Amplitude ip{};
    for (size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
    return std::norm(ip);
}

double fidelity(const GlobalState &a, const GlobalState &b, const std::vector<QubitId> &subset_a,
                const std::vector<QubitId> &subset_b) {
    if (subset_a.size() != subset_b.size()) throw Error(ErrorCode::MismatchedSubset, "subsets have different sizes");
    return fidelity(a.extract(subset_a), b.extract(subset_b));
}

double max_abs_diff_up_to_phase(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) throw Error(ErrorCode::MismatchedSubset, "states have different dimensions");
    Amplitude ip{};
    for (size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
    const Amplitude phase = std::abs(ip) > 1e-300 ? ip / std::abs(ip) : Amplitude(1.0, 0.0);
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] * phase - b[i]));
    return worst;
}

StateVector tensor_product(const std::vector<std::array<Amplitude, 2>> &factors) {
    StateVector v{Amplitude(1.0, 0.0)};
    for (const auto &f : factors) {
        StateVector next(v.size() * 2);
        for (size_t i = 0; i < v.size(); ++i) {
            next[2 * i] = v[i] * f[0];
            next[2 * i + 1] = v[i] * f[1];
        }
        v = std::move(next);
    }
    return v;
}

}  // namespace netqir
