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
 * Minimum-error discrimination of coherent-state hypotheses.
 *
 * Binary problems are solved exactly (Helstrom). For N > 2 pure states the
 * optimum is not computed; the library brackets it between the closest-pair
 * Helstrom error (lower) and the square-root measurement error (upper).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ykqkd/quantum_core.hpp"

namespace ykqkd {

enum class DiscriminationMethod {
    HelstromPure,
    HelstromMixed,
    SquareRootMeasurement,
    NeighborLowerBound,
    PureGuess,
    PoissonThreshold,
};

inline std::string_view method_name(DiscriminationMethod m) {
    switch (m) {
        case DiscriminationMethod::HelstromPure:
            return "helstrom-pure";
        case DiscriminationMethod::HelstromMixed:
            return "helstrom-mixed";
        case DiscriminationMethod::SquareRootMeasurement:
            return "srm";
        case DiscriminationMethod::NeighborLowerBound:
            return "neighbor-lower-bound";
        case DiscriminationMethod::PureGuess:
            return "pure-guess";
        case DiscriminationMethod::PoissonThreshold:
            return "poisson-threshold";
    }
    return "unknown";
}

struct DiscriminationResult {
    double error_probability = 0.0;
    DiscriminationMethod method = DiscriminationMethod::PureGuess;
    std::size_t n_hypotheses = 2;
    // Eigenvalues of p1 rho1 - p0 rho0 (Helstrom mixed) or of the weighted Gram (SRM).
    std::vector<double> eigenvalues;
    std::optional<std::int64_t> threshold;
    std::size_t rank_deficiency = 0;
};

namespace detail {

inline void require_open_prior(double p1, const char *who) {
    if (!(p1 > 0.0 && p1 < 1.0)) {
        throw std::invalid_argument(std::string(who) + ": prior must lie strictly between 0 and 1, got " +
                                    std::to_string(p1));
    }
}

// 1/2 (1 - sqrt(1 - x)) without cancellation for small x.
inline double half_one_minus_sqrt_one_minus(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return 0.5 * x / (1.0 + std::sqrt(1.0 - x));
}

}  // namespace detail

/// Helstrom error for two pure states with priors (p1, 1 - p1):
/// 1/2 (1 - sqrt(1 - 4 p1 p0 |<a|b>|^2)).
inline DiscriminationResult helstrom_pure_binary(const CoherentState &a, const CoherentState &b, double p1) {
    detail::require_open_prior(p1, "helstrom_pure_binary");
    const double s2 = std::norm(coherent_overlap(a, b));
    DiscriminationResult r;
    r.method = DiscriminationMethod::HelstromPure;
    r.error_probability = detail::half_one_minus_sqrt_one_minus(4.0 * p1 * (1.0 - p1) * s2);
    return r;
}

/// Helstrom error for two density operators on a common span:
/// 1/2 (1 - || p1 rho1 - p0 rho0 ||_1).
inline DiscriminationResult helstrom_mixed_binary(const SpanOperator &rho1, const SpanOperator &rho0, double p1) {
    detail::require_open_prior(p1, "helstrom_mixed_binary");
    if (!rho1.compatible_with(rho0)) {
        throw std::invalid_argument("helstrom_mixed_binary: operators live on different spans");
    }
    const ComplexMatrix diff = p1 * rho1.matrix() - (1.0 - p1) * rho0.matrix();
    const ComplexMatrix sym = 0.5 * (diff + diff.adjoint());
    const RealVector lambda = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();

    double trace_norm = 0.0;
    DiscriminationResult r;
    r.method = DiscriminationMethod::HelstromMixed;
    r.rank_deficiency = rho1.rank_deficiency();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        trace_norm += std::abs(lambda(i));
        r.eigenvalues.push_back(lambda(i));
    }
    r.error_probability = std::clamp(0.5 * (1.0 - trace_norm), 0.0, 0.5);
    return r;
}

/// 1/2 || rho - sigma ||_1.
inline double trace_distance(const SpanOperator &rho, const SpanOperator &sigma) {
    if (!rho.compatible_with(sigma)) {
        throw std::invalid_argument("trace_distance: operators live on different spans");
    }
    const ComplexMatrix diff = rho.matrix() - sigma.matrix();
    const ComplexMatrix sym = 0.5 * (diff + diff.adjoint());
    const RealVector lambda = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    return 0.5 * lambda.cwiseAbs().sum();
}

inline DiscriminationResult pure_guess_error(std::size_t n_hypotheses) {
    if (n_hypotheses < 1) {
        throw std::invalid_argument("pure_guess_error: need at least one hypothesis");
    }
    DiscriminationResult r;
    r.method = DiscriminationMethod::PureGuess;
    r.n_hypotheses = n_hypotheses;
    r.error_probability = static_cast<double>(n_hypotheses - 1) / static_cast<double>(n_hypotheses);
    return r;
}

struct SrmDiagonal {
    std::vector<double> diagonal;  // (G'^{1/2})_ii on the resolved subspace
    RealVector eigenvalues;        // of G'
    std::size_t rank_deficiency = 0;
};

/// Diagonal of the square root of the prior-weighted Gram matrix. Entry i is
/// sqrt(p_i) <mu_i|psi_i> for the square-root measurement vector mu_i.
/// Computed as (G'^{-1/2} G')_ii so that unresolved directions, which carry
/// no measurement operator, contribute nothing; taking the forward root
/// directly would let round-off eigenvalues near 1e-16 add about 1e-8.
inline SrmDiagonal srm_diagonal(std::span<const CoherentState> constellation, std::span<const double> priors) {
    const std::size_t n = constellation.size();
    if (n == 0 || priors.size() != n) {
        throw std::invalid_argument("srm_error: need one prior per state");
    }
    double total = 0.0;
    for (double p : priors) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("srm_error: negative prior");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("srm_error: priors must sum to 1");
    }

    ComplexMatrix weighted = gram_matrix(constellation).matrix();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            weighted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= std::sqrt(priors[i] * priors[j]);
        }
    }
    const HermitianRoots roots = hermitian_sqrt_and_invsqrt(weighted);
    SrmDiagonal out;
    const ComplexMatrix resolved_root = roots.inv_sqrt * weighted;
    for (Eigen::Index i = 0; i < resolved_root.rows(); ++i) {
        out.diagonal.push_back(resolved_root(i, i).real());
    }
    out.eigenvalues = roots.eigenvalues;
    out.rank_deficiency = roots.rank_deficiency;
    return out;
}

/// Square-root (pretty good) measurement error for pure states with the given
/// priors: 1 - sum_i ((G'^{1/2})_ii)^2. Unequal priors are supported as an
/// extension; the equal-prior case is the one used throughout the experiments.
inline DiscriminationResult srm_error(std::span<const CoherentState> constellation, std::span<const double> priors) {
    const SrmDiagonal d = srm_diagonal(constellation, priors);
    double success = 0.0;
    for (double x : d.diagonal) {
        success += x * x;
    }
    DiscriminationResult r;
    r.method = DiscriminationMethod::SquareRootMeasurement;
    r.n_hypotheses = constellation.size();
    r.rank_deficiency = d.rank_deficiency;
    r.eigenvalues.assign(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
    const double max_prior = *std::max_element(priors.begin(), priors.end());
    r.error_probability = std::clamp(1.0 - success, 0.0, 1.0 - max_prior);
    return r;
}

inline DiscriminationResult srm_error(std::span<const CoherentState> constellation) {
    std::vector<double> priors(constellation.size(), 1.0 / static_cast<double>(constellation.size()));
    return srm_error(constellation, priors);
}

/// Equal-prior Helstrom error for the closest pair of the grid after scaling
/// every level by `scale`.
inline DiscriminationResult neighbor_lower_bound(const AmplitudeGrid &grid, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("neighbor_lower_bound: scale must be positive");
    }
    const double d = scale * grid.spacing();
    DiscriminationResult r = helstrom_pure_binary(CoherentState(0.0), CoherentState(d), 0.5);
    r.method = DiscriminationMethod::NeighborLowerBound;
    r.n_hypotheses = grid.size();
    return r;
}

/// Bob's error on his basis pair when he knows which pair is in use.
inline DiscriminationResult bob_error_ideal(const CoherentState &pair_low, const CoherentState &pair_high) {
    return helstrom_pure_binary(pair_low, pair_high, 0.5);
}

// ---------------------------------------------------------------------------
// Direct detection.

/// Poisson probability mass for k counts at mean mu.
inline double poisson_pmf(std::int64_t k, double mu) {
    if (k < 0) {
        return 0.0;
    }
    if (mu <= 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(mu) - mu - std::lgamma(kd + 1.0));
}

/// P(N < k) for N ~ Poisson(mu).
inline double poisson_cdf_below(std::int64_t k, double mu) {
    double s = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
        s += poisson_pmf(i, mu);
    }
    return std::min(s, 1.0);
}

/// Photon-counting receiver deciding between a low- and a high-intensity
/// hypothesis: count >= threshold selects the high one.
struct PoissonReceiver {
    double mean_low = 0.0;
    double mean_high = 0.0;
    double dark_mean = 0.0;
    double prior_high = 0.5;
    std::int64_t threshold = 0;

    bool decides_high(std::int64_t count) const { return count >= threshold; }

    /// Error of this fixed threshold when the actual signal means are
    /// (low, high); the receiver's own design means by default.
    double error_for(double actual_low, double actual_high) const {
        const double p_low_wrong = 1.0 - poisson_cdf_below(threshold, actual_low + dark_mean);
        const double p_high_wrong = poisson_cdf_below(threshold, actual_high + dark_mean);
        return (1.0 - prior_high) * std::max(0.0, p_low_wrong) + prior_high * p_high_wrong;
    }
    double error() const { return error_for(mean_low, mean_high); }
};

struct PoissonDecision {
    PoissonReceiver receiver;
    DiscriminationResult result;
};

/// Minimum-error integer threshold for Poisson counts with means
/// mean0 + dark and mean1 + dark; `p1` is the prior of the mean1 hypothesis.
/// The hypotheses are relabelled so that the receiver's "high" side is the
/// larger mean. Ties resolve to the smallest threshold.
inline PoissonDecision poisson_threshold_receiver(double mean0, double mean1, double dark, double p1) {
    if (!std::isfinite(mean0) || !std::isfinite(mean1) || !std::isfinite(dark) || mean0 < 0.0 || mean1 < 0.0 ||
        dark < 0.0) {
        throw std::invalid_argument("poisson_threshold_receiver: means must be finite and non-negative");
    }
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("poisson_threshold_receiver: prior outside [0, 1]");
    }
    PoissonReceiver rx;
    rx.dark_mean = dark;
    if (mean0 <= mean1) {
        rx.mean_low = mean0;
        rx.mean_high = mean1;
        rx.prior_high = p1;
    } else {
        rx.mean_low = mean1;
        rx.mean_high = mean0;
        rx.prior_high = 1.0 - p1;
    }

    const double mu_low = rx.mean_low + dark;
    const double mu_high = rx.mean_high + dark;
    const auto t_max = static_cast<std::int64_t>(std::ceil(mu_high) + 10.0 * std::sqrt(mu_high) + 10.0);

    // error(T) = p_low P(N_low >= T) + p_high P(N_high < T), accumulated incrementally.
    const double p_high = rx.prior_high;
    const double p_low = 1.0 - p_high;
    double cdf_low = 0.0;
    double cdf_high = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_t = 0;
    for (std::int64_t t = 0; t <= t_max; ++t) {
        const double err = p_low * std::max(0.0, 1.0 - cdf_low) + p_high * std::min(1.0, cdf_high);
        if (err < best) {
            best = err;
            best_t = t;
        }
        cdf_low += poisson_pmf(t, mu_low);
        cdf_high += poisson_pmf(t, mu_high);
    }
    rx.threshold = best_t;

    DiscriminationResult r;
    r.method = DiscriminationMethod::PoissonThreshold;
    r.threshold = best_t;
    r.error_probability = rx.error();
    return {rx, r};
}

}  // namespace ykqkd
