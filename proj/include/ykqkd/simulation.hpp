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

/**
 * Monte-Carlo model of the intensity-modulated link.
 *
 * Alice -> [Eve] -> fiber (amplitude transmission kappa) -> Bob's photon
 * counter. Eve sits next to the transmitter. A translucent Eve splits off an
 * amplitude fraction eta (power fraction eta^2); an opaque Eve intercepts the
 * whole pulse and replaces it.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ykqkd/detection.hpp"
#include "ykqkd/protocol.hpp"
#include "ykqkd/quantum_core.hpp"

namespace ykqkd {

using Rng = std::mt19937_64;

struct ChannelConfig {
    double fiber_length_km = 0.0;
    double loss_db_per_km = 0.2;
    double extra_attenuation_db = 0.0;
    double dark_mean = 0.0;  // counts per slot

    double total_loss_db() const { return fiber_length_km * loss_db_per_km + extra_attenuation_db; }
};

inline void validate(const ChannelConfig &c) {
    if (!(c.fiber_length_km >= 0.0) || !(c.loss_db_per_km >= 0.0) || !(c.extra_attenuation_db >= 0.0) ||
        !(c.dark_mean >= 0.0) || !std::isfinite(c.total_loss_db()) || !std::isfinite(c.dark_mean)) {
        throw std::invalid_argument("ChannelConfig: lengths, losses and dark counts must be finite and non-negative");
    }
}

/// kappa = 10^(-loss_dB / 20).
inline double amplitude_transmission(const ChannelConfig &c) {
    validate(c);
    return std::pow(10.0, -c.total_loss_db() / 20.0);
}

struct NoEve {};
struct TranslucentEve {
    double eta_amp = 0.1;  // amplitude fraction; power fraction is eta_amp^2
};
struct OpaqueEve {
    double eve_dark_mean = 0.0;
};
using EveModel = std::variant<NoEve, TranslucentEve, OpaqueEve>;

struct ProtocolConfig {
    double alpha_max = 700.0;
    unsigned m = 4;
    unsigned pairing_offset = 0;  // 0 selects M
    BitAssignmentScheme scheme = BitAssignmentScheme::OverlapPairwise;
    std::uint64_t key_seed = 0x2545F491u;
    std::vector<unsigned> key_taps = KeyStream::default_taps();
    unsigned key_length = KeyStream::kDefaultLength;
    double detection_threshold = 0.15;  // Bob BER above this flags an eavesdropper
    double min_mean_count = 1.0;        // sensitivity floor for Bob's weakest high level

    PairAssignment assignment() const { return PairAssignment(AmplitudeGrid(alpha_max, m), pairing_offset); }
    KeyStream key_stream() const { return KeyStream::from_integer(key_seed, key_taps, key_length); }
};

inline void validate(const ProtocolConfig &p) {
    if (!is_power_of_two(p.m)) {
        throw std::invalid_argument("ProtocolConfig: M must be a power of two");
    }
    if (!(p.detection_threshold > 0.0 && p.detection_threshold < 1.0)) {
        throw std::invalid_argument("ProtocolConfig: detection threshold must lie in (0, 1)");
    }
    (void)p.assignment();
    (void)p.key_stream();
}

struct TapOutput {
    CoherentState eve;
    CoherentState bob;
};

/// Beam-splitter tap: Eve gets eta_amp * a, Bob gets sqrt(1 - eta_amp^2) * a.
inline TapOutput tap_split(const CoherentState &a, double eta_amp) {
    if (!(eta_amp > 0.0 && eta_amp < 1.0)) {
        throw std::invalid_argument("tap_split: eta_amp must lie in (0, 1)");
    }
    return {CoherentState(eta_amp * a.amplitude()), CoherentState(std::sqrt(1.0 - eta_amp * eta_amp) * a.amplitude())};
}

inline std::int64_t sample_poisson(double mean, Rng &rng) {
    if (mean <= 0.0) {
        return 0;
    }
    return std::poisson_distribution<std::int64_t>(mean)(rng);
}

/// Photon count for coherent light plus dark counts.
inline std::int64_t sample_photon_count(const CoherentState &a, double dark_mean, Rng &rng) {
    return sample_poisson(a.mean_photon_number() + dark_mean, rng);
}

/// Maximum-likelihood index into `amplitudes` for a Poisson count.
inline std::size_t ml_level_index(std::int64_t count, std::span<const double> amplitudes, double dark_mean = 0.0) {
    if (amplitudes.empty()) {
        throw std::invalid_argument("ml_level_index: no candidate levels");
    }
    const double k = static_cast<double>(count);
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < amplitudes.size(); ++j) {
        const double mu = amplitudes[j] * amplitudes[j] + dark_mean;
        double ll;
        if (mu <= 0.0) {
            ll = count == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        } else {
            ll = k * std::log(mu) - mu;
        }
        if (ll > best_ll) {
            best_ll = ll;
            best = j;
        }
    }
    return best;
}

struct OpaqueInterception {
    std::size_t ml_level = 1;   // Eve's 1-based estimate of the transmitted level
    std::uint8_t bit_guess = 0; // her bit decision, taken as if the polarity were A1
    SymbolChoice resend_choice; // her own guess of the basis, drawn from her randomness
    CoherentState resent;       // full-power state forwarded to Bob
};

/// Intercept-resend attack. Eve photon-counts the whole pulse, estimates the
/// level by maximum likelihood, reads a bit from it without knowing the
/// polarity, and re-encodes that bit on a basis she draws herself.
inline OpaqueInterception opaque_eve_act(const CoherentState &a, const PairAssignment &assignment, Rng &rng,
                                         double eve_dark_mean = 0.0) {
    const auto levels = assignment.grid().levels();
    const std::int64_t count = sample_photon_count(a, eve_dark_mean, rng);

    OpaqueInterception out;
    out.ml_level = ml_level_index(count, levels, eve_dark_mean) + 1;
    const auto [pair, high] = assignment.locate(out.ml_level);
    (void)pair;
    out.bit_guess = bit_from_decision(high, Polarity::A1);

    std::uniform_int_distribution<unsigned> pick_pair(0, static_cast<unsigned>(assignment.size() - 1));
    out.resend_choice.pair_index = pick_pair(rng);
    out.resend_choice.polarity = std::bernoulli_distribution(0.5)(rng) ? Polarity::A2 : Polarity::A1;
    out.resent = encode_bit(out.bit_guess, out.resend_choice, assignment);
    return out;
}

struct EveBounds {
    double bit_error = 0.5;          // Helstrom error on her key-averaged bit operators
    double state_id_lower = 0.0;     // closest-pair Helstrom error
    double state_id_srm = 0.0;       // square-root measurement error
    double state_id_pure_guess = 0.0;
    double eve_scale = 1.0;
};

/// Eve's analytic error figures when she holds the grid scaled by `eve_scale`.
inline EveBounds eve_bounds(const PairAssignment &assignment, double eve_scale, BitAssignmentScheme scheme) {
    const auto ops = eve_density_operators(assignment, scheme, eve_scale);
    const auto states = assignment.grid().states(eve_scale);
    EveBounds b;
    b.eve_scale = eve_scale;
    b.bit_error = helstrom_mixed_binary(ops.rho1, ops.rho0, 0.5).error_probability;
    b.state_id_lower = neighbor_lower_bound(assignment.grid(), eve_scale).error_probability;
    b.state_id_srm = srm_error(states).error_probability;
    b.state_id_pure_guess = pure_guess_error(states.size()).error_probability;
    return b;
}

inline EveBounds translucent_eve_bounds(const PairAssignment &assignment, double eta_amp, BitAssignmentScheme scheme) {
    if (!(eta_amp > 0.0 && eta_amp < 1.0)) {
        throw std::invalid_argument("translucent_eve_bounds: eta_amp must lie in (0, 1)");
    }
    return eve_bounds(assignment, eta_amp, scheme);
}

/// Per-pair minimum-error receivers for Bob, designed for the no-Eve channel.
inline std::vector<PoissonReceiver> bob_receivers(const PairAssignment &assignment, double kappa, double dark_mean) {
    std::vector<PoissonReceiver> out;
    const auto &grid = assignment.grid();
    for (const auto &p : assignment.pairs()) {
        const double lo = kappa * grid.level(p.low);
        const double hi = kappa * grid.level(p.high);
        out.push_back(poisson_threshold_receiver(lo * lo, hi * hi, dark_mean, 0.5).receiver);
    }
    return out;
}

/// Expected Bob BER with uniformly used pairs. A translucent Eve lowers the
/// received means by (1 - eta^2) while the receivers stay at their no-Eve design.
inline std::optional<double> analytic_bob_ber(const ProtocolConfig &pcfg, const ChannelConfig &ccfg, const EveModel &eve) {
    if (std::holds_alternative<OpaqueEve>(eve)) {
        return std::nullopt;
    }
    double power = 1.0;
    if (const auto *t = std::get_if<TranslucentEve>(&eve)) {
        power = 1.0 - t->eta_amp * t->eta_amp;
    }
    const auto assignment = pcfg.assignment();
    const double kappa = amplitude_transmission(ccfg);
    const auto receivers = bob_receivers(assignment, kappa, ccfg.dark_mean);
    double sum = 0.0;
    for (const auto &rx : receivers) {
        sum += rx.error_for(power * rx.mean_low, power * rx.mean_high);
    }
    return sum / static_cast<double>(receivers.size());
}

struct RunResult {
    std::uint64_t n_symbols = 0;
    std::uint64_t bob_errors = 0;
    double bob_ber = 0.0;
    double bob_mean_count = 0.0;
    std::optional<double> bob_ber_analytic;
    std::optional<EveBounds> eve;  // analytic figures for the active eavesdropper
    // Opaque Eve only: empirical level-identification and bit errors.
    std::optional<double> eve_state_id_empirical;
    std::optional<double> eve_bit_error_empirical;
    bool eve_detected = false;
    std::uint64_t rng_seed = 0;
    double kappa = 1.0;
    std::vector<std::string> warnings;

    /// Binomial standard error of bob_ber around `p`.
    double standard_error(double p) const {
        return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_symbols));
    }
};

namespace detail {

// Independent engines per role so that paired runs with and without an
// eavesdropper see the same data bits and channel noise.
inline Rng role_rng(std::uint64_t seed, std::uint32_t role) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), role};
    return Rng(seq);
}

}  // namespace detail

inline RunResult run_protocol(const ProtocolConfig &pcfg, const ChannelConfig &ccfg, const EveModel &eve,
                              std::uint64_t n_symbols, std::uint64_t seed) {
    if (n_symbols == 0) {
        throw std::invalid_argument("run_protocol: n_symbols must be positive");
    }
    validate(pcfg);
    validate(ccfg);
    if (const auto *t = std::get_if<TranslucentEve>(&eve); t && !(t->eta_amp > 0.0 && t->eta_amp < 1.0)) {
        throw std::invalid_argument("run_protocol: translucent eta_amp must lie in (0, 1)");
    }

    const PairAssignment assignment = pcfg.assignment();
    const double kappa = amplitude_transmission(ccfg);
    const auto receivers = bob_receivers(assignment, kappa, ccfg.dark_mean);

    RunResult r;
    r.n_symbols = n_symbols;
    r.rng_seed = seed;
    r.kappa = kappa;

    const double weakest_high = kappa * assignment.grid().level(assignment.pair(0).high);
    if (weakest_high * weakest_high < pcfg.min_mean_count) {
        r.warnings.push_back("Bob's weakest high level averages " + std::to_string(weakest_high * weakest_high) +
                             " counts, below the sensitivity floor of " + std::to_string(pcfg.min_mean_count));
    }

    KeyStream alice_key = pcfg.key_stream();
    KeyStream bob_key = pcfg.key_stream();
    Rng data_rng = detail::role_rng(seed, 1);
    Rng bob_rng = detail::role_rng(seed, 2);
    Rng eve_rng = detail::role_rng(seed, 3);
    std::bernoulli_distribution coin(0.5);

    std::uint64_t eve_level_errors = 0;
    std::uint64_t eve_bit_errors = 0;
    double count_sum = 0.0;

    for (std::uint64_t i = 0; i < n_symbols; ++i) {
        const SymbolChoice alice = select_basis(alice_key, i, pcfg.m);
        const auto bit = static_cast<std::uint8_t>(coin(data_rng));
        const std::size_t level = encode_level(bit, alice, assignment);
        CoherentState sent(assignment.grid().level(level));

        if (const auto *t = std::get_if<TranslucentEve>(&eve)) {
            sent = tap_split(sent, t->eta_amp).bob;
        } else if (const auto *o = std::get_if<OpaqueEve>(&eve)) {
            const OpaqueInterception x = opaque_eve_act(sent, assignment, eve_rng, o->eve_dark_mean);
            eve_level_errors += x.ml_level != level;
            eve_bit_errors += x.bit_guess != bit;
            sent = x.resent;
        }

        const CoherentState received(kappa * sent.amplitude());
        const std::int64_t count = sample_photon_count(received, ccfg.dark_mean, bob_rng);
        count_sum += static_cast<double>(count);

        const SymbolChoice bob = select_basis(bob_key, i, pcfg.m);
        const std::uint8_t decoded = decode_count(count, bob, assignment, receivers[bob.pair_index]);
        r.bob_errors += decoded != bit;
    }

    const auto n = static_cast<double>(n_symbols);
    r.bob_ber = static_cast<double>(r.bob_errors) / n;
    r.bob_mean_count = count_sum / n;
    r.bob_ber_analytic = analytic_bob_ber(pcfg, ccfg, eve);
    if (const auto *t = std::get_if<TranslucentEve>(&eve)) {
        r.eve = translucent_eve_bounds(assignment, t->eta_amp, pcfg.scheme);
    } else if (std::holds_alternative<OpaqueEve>(eve)) {
        r.eve = eve_bounds(assignment, 1.0, pcfg.scheme);
        r.eve_state_id_empirical = static_cast<double>(eve_level_errors) / n;
        r.eve_bit_error_empirical = static_cast<double>(eve_bit_errors) / n;
    }
    r.eve_detected = r.bob_ber > pcfg.detection_threshold;
    return r;
}

}  // namespace ykqkd
