// Copyright 2026 The ykqkd Authors
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
#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ykqkd/detection.hpp"
#include "ykqkd/quantum_core.hpp"

namespace ykqkd {

/// Running key expanded from a short shared seed by a Fibonacci linear
/// feedback shift register. Register cells are numbered 1..L; each step
/// outputs cell L, shifts every cell up by one and feeds the XOR of the tap
/// cells into cell 1. Not a cryptographic cipher.
class KeyStream {
   public:
    KeyStream(std::vector<std::uint8_t> seed, std::vector<unsigned> taps) : state_(std::move(seed)), taps_(std::move(taps)) {
        if (state_.empty()) {
            throw std::invalid_argument("KeyStream: empty seed");
        }
        if (std::none_of(state_.begin(), state_.end(), [](std::uint8_t b) { return b != 0; })) {
            throw std::invalid_argument("KeyStream: all-zero seed locks the register");
        }
        for (auto &b : state_) {
            if (b > 1) {
                throw std::invalid_argument("KeyStream: seed entries must be 0 or 1");
            }
        }
        if (taps_.empty()) {
            throw std::invalid_argument("KeyStream: no taps");
        }
        for (auto t : taps_) {
            if (t < 1 || t > state_.size()) {
                throw std::invalid_argument("KeyStream: tap " + std::to_string(t) + " outside register of length " +
                                            std::to_string(state_.size()));
            }
        }
    }

    /// Seed from a string of '0'/'1' characters, cell 1 first.
    static KeyStream from_string(std::string_view seed, std::vector<unsigned> taps) {
        std::vector<std::uint8_t> bits;
        for (char c : seed) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("KeyStream: seed must be a binary string");
            }
            bits.push_back(c == '1');
        }
        return KeyStream(std::move(bits), std::move(taps));
    }

    /// Seed from the low `length` bits of an integer (bit 0 is cell 1).
    static KeyStream from_integer(std::uint64_t seed, std::vector<unsigned> taps, unsigned length) {
        std::vector<std::uint8_t> bits(length);
        for (unsigned i = 0; i < length; ++i) {
            bits[i] = static_cast<std::uint8_t>((seed >> i) & 1u);
        }
        return KeyStream(std::move(bits), std::move(taps));
    }

    /// Default 31-cell register with primitive feedback x^31 + x^28 + 1.
    static std::vector<unsigned> default_taps() { return {31, 28}; }
    static constexpr unsigned kDefaultLength = 31;

    std::size_t register_length() const { return state_.size(); }

    /// Bit `index` of the running key (0-based), generating as needed.
    std::uint8_t bit(std::uint64_t index) {
        while (cache_.size() <= index) {
            cache_.push_back(step());
        }
        return cache_[index];
    }

    std::vector<std::uint8_t> take(std::uint64_t n) {
        std::vector<std::uint8_t> out;
        out.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            out.push_back(bit(i));
        }
        return out;
    }

   private:
    std::uint8_t step() {
        const std::uint8_t out = state_.back();
        std::uint8_t fb = 0;
        for (auto t : taps_) {
            fb ^= state_[t - 1];
        }
        std::rotate(state_.rbegin(), state_.rbegin() + 1, state_.rend());
        state_.front() = fb;
        return out;
    }

    std::vector<std::uint8_t> state_;
    std::vector<unsigned> taps_;
    std::vector<std::uint8_t> cache_;
};

inline std::vector<std::uint8_t> expand_key(std::span<const std::uint8_t> seed, std::vector<unsigned> taps, std::uint64_t n) {
    KeyStream ks(std::vector<std::uint8_t>(seed.begin(), seed.end()), std::move(taps));
    return ks.take(n);
}

enum class Polarity : std::uint8_t {
    A1,  // 0 -> low level, 1 -> high level
    A2,  // 0 -> high level, 1 -> low level
};

struct SymbolChoice {
    unsigned pair_index = 0;
    Polarity polarity = Polarity::A1;
    bool operator==(const SymbolChoice &) const = default;
};

inline bool is_power_of_two(unsigned m) { return m != 0 && std::has_single_bit(m); }

/// Keystream bits consumed per symbol: log2(M) pair bits then one polarity bit.
inline unsigned symbol_window_bits(unsigned m) {
    if (!is_power_of_two(m)) {
        throw std::invalid_argument("symbol window: M must be a power of two, got " + std::to_string(m));
    }
    return static_cast<unsigned>(std::countr_zero(m)) + 1;
}

inline SymbolChoice select_basis(KeyStream &stream, std::uint64_t symbol_index, unsigned m) {
    const unsigned w = symbol_window_bits(m);
    const std::uint64_t base = symbol_index * w;
    SymbolChoice c;
    for (unsigned i = 0; i + 1 < w; ++i) {
        c.pair_index = (c.pair_index << 1) | stream.bit(base + i);
    }
    c.polarity = stream.bit(base + w - 1) ? Polarity::A2 : Polarity::A1;
    return c;
}

/// How bit values are attached to levels.
enum class BitAssignmentScheme {
    // Key-selected polarity per pair: every level carries 0 or 1 depending on the key.
    OverlapPairwise,
    // Level j permanently carries bit (j mod 2).
    AlternatingNoOverlap,
};

inline std::string_view scheme_name(BitAssignmentScheme s) {
    return s == BitAssignmentScheme::OverlapPairwise ? "overlap-pairwise" : "alternating-no-overlap";
}

/// Partition of the 2M grid levels into M (low, high) pairs separated by
/// `offset` level steps. Levels are grouped in blocks of 2*offset; within a
/// block level i pairs with level i + offset. With offset = M there is one
/// block and pair j is (j, j + M).
class PairAssignment {
   public:
    struct Pair {
        std::size_t low;   // 1-based level index
        std::size_t high;  // 1-based level index
    };

    explicit PairAssignment(AmplitudeGrid grid, unsigned offset = 0) : grid_(grid), offset_(offset ? offset : grid.m()) {
        if (grid_.m() % offset_ != 0) {
            throw std::invalid_argument("PairAssignment: offset " + std::to_string(offset_) + " must divide M = " +
                                        std::to_string(grid_.m()));
        }
        const std::size_t block = 2 * static_cast<std::size_t>(offset_);
        for (std::size_t start = 1; start <= grid_.size(); start += block) {
            for (std::size_t i = 0; i < offset_; ++i) {
                pairs_.push_back({start + i, start + i + offset_});
            }
        }
    }

    const AmplitudeGrid &grid() const { return grid_; }
    unsigned offset() const { return offset_; }
    std::size_t size() const { return pairs_.size(); }
    const std::vector<Pair> &pairs() const { return pairs_; }
    const Pair &pair(std::size_t i) const { return pairs_.at(i); }
    double pair_distance() const { return static_cast<double>(offset_) * grid_.spacing(); }

    /// Pair index and whether the level is the high member.
    std::pair<std::size_t, bool> locate(std::size_t level) const {
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (pairs_[i].low == level) {
                return {i, false};
            }
            if (pairs_[i].high == level) {
                return {i, true};
            }
        }
        throw std::out_of_range("PairAssignment: level " + std::to_string(level) + " not in any pair");
    }

   private:
    AmplitudeGrid grid_;
    unsigned offset_;
    std::vector<Pair> pairs_;
};

/// True when `bit` is sent on the high member of the pair.
inline bool sends_high(std::uint8_t bit, Polarity polarity) { return (bit != 0) == (polarity == Polarity::A1); }

/// 1-based grid level that carries `bit` under `choice`.
inline std::size_t encode_level(std::uint8_t bit, const SymbolChoice &choice, const PairAssignment &assignment) {
    const auto &p = assignment.pair(choice.pair_index);
    return sends_high(bit, choice.polarity) ? p.high : p.low;
}

inline CoherentState encode_bit(std::uint8_t bit, const SymbolChoice &choice, const PairAssignment &assignment) {
    return CoherentState(assignment.grid().level(encode_level(bit, choice, assignment)));
}

/// Bit implied by a high/low decision under the given polarity.
inline std::uint8_t bit_from_decision(bool high, Polarity polarity) {
    return static_cast<std::uint8_t>(high == (polarity == Polarity::A1));
}

inline std::uint8_t decode_count(std::int64_t count, const SymbolChoice &choice, const PairAssignment & /*assignment*/,
                                 const PoissonReceiver &receiver) {
    return bit_from_decision(receiver.decides_high(count), choice.polarity);
}

struct EveOperators {
    SpanOperator rho1;
    SpanOperator rho0;
};

/// Eve's key-averaged density operators for bit 1 and bit 0 when she holds
/// the grid scaled by `eve_scale`.
inline EveOperators eve_density_operators(const PairAssignment &assignment, BitAssignmentScheme scheme, double eve_scale) {
    if (!(eve_scale > 0.0) || !std::isfinite(eve_scale)) {
        throw std::invalid_argument("eve_density_operators: eve_scale must be positive");
    }
    const AmplitudeGrid &grid = assignment.grid();
    auto basis = std::make_shared<const SpanBasis>(grid.states(eve_scale));

    std::vector<std::size_t> ones;
    std::vector<std::size_t> zeros;
    if (scheme == BitAssignmentScheme::OverlapPairwise) {
        // Under a uniform key every level carries either bit equally often.
        std::vector<std::size_t> all(grid.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        ones = all;
        zeros = all;
    } else {
        for (std::size_t j = 1; j <= grid.size(); ++j) {
            (j % 2 == 1 ? ones : zeros).push_back(j - 1);
        }
    }
    return {mixture_in_span(StateMixture::uniform(ones), basis), mixture_in_span(StateMixture::uniform(zeros), basis)};
}

}  // namespace ykqkd
