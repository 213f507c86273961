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
 * Coherent-state algebra.
 *
 * Everything in this library that talks about quantum states reduces to
 * inner products between coherent states. A finite constellation of coherent
 * states spans a finite-dimensional subspace; density operators built from the
 * constellation are represented exactly as small Hermitian matrices in the
 * symmetrically (Lowdin) orthonormalized basis of that span. Truncated Fock
 * vectors are provided only as an independent cross-check.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ykqkd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Complex field amplitude in units of sqrt(photons).
using ComplexAmplitude = Complex;

/// A single-mode coherent state |alpha>.
class CoherentState {
   public:
    constexpr CoherentState() = default;
    explicit CoherentState(ComplexAmplitude alpha) : alpha_(alpha) {
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
            throw std::invalid_argument("CoherentState: amplitude must be finite");
        }
    }
    explicit CoherentState(double real_alpha) : CoherentState(ComplexAmplitude{real_alpha, 0.0}) {}

    ComplexAmplitude amplitude() const { return alpha_; }
    double mean_photon_number() const { return std::norm(alpha_); }

    bool operator==(const CoherentState &) const = default;

   private:
    ComplexAmplitude alpha_{0.0, 0.0};
};

/// <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b).
inline Complex coherent_overlap(ComplexAmplitude a, ComplexAmplitude b) {
    if (a == b) {
        return {1.0, 0.0};
    }
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

inline Complex coherent_overlap(const CoherentState &a, const CoherentState &b) {
    return coherent_overlap(a.amplitude(), b.amplitude());
}

/// Product state |e^{-i theta/2} alpha/sqrt2>_1 (x) |e^{+i theta/2} alpha/sqrt2>_2 with
/// theta = bit_phase + key_phase. The relative phase rotation between the two
/// modes is generated by J_z = (a1'a1 - a2'a2)/2.
class TwoModeCipheredState {
   public:
    TwoModeCipheredState(ComplexAmplitude base, double bit_phase, double key_phase)
        : base_(base), bit_phase_(bit_phase), key_phase_(key_phase) {
        if (!std::isfinite(base.real()) || !std::isfinite(base.imag()) || !std::isfinite(bit_phase) ||
            !std::isfinite(key_phase)) {
            throw std::invalid_argument("TwoModeCipheredState: non-finite parameter");
        }
    }

    ComplexAmplitude base_amplitude() const { return base_; }
    double bit_phase() const { return bit_phase_; }
    double key_phase() const { return key_phase_; }
    double total_phase() const { return bit_phase_ + key_phase_; }

    CoherentState mode1() const {
        return CoherentState(std::polar(1.0, -0.5 * total_phase()) * base_ / std::numbers::sqrt2);
    }
    CoherentState mode2() const {
        return CoherentState(std::polar(1.0, 0.5 * total_phase()) * base_ / std::numbers::sqrt2);
    }
    double mean_photon_number() const { return mode1().mean_photon_number() + mode2().mean_photon_number(); }

   private:
    ComplexAmplitude base_;
    double bit_phase_;
    double key_phase_;
};

inline TwoModeCipheredState two_mode_cipher_state(ComplexAmplitude alpha, double bit_phase, double key_phase) {
    return TwoModeCipheredState(alpha, bit_phase, key_phase);
}

inline Complex two_mode_overlap(const TwoModeCipheredState &s1, const TwoModeCipheredState &s2) {
    return coherent_overlap(s1.mode1(), s2.mode1()) * coherent_overlap(s1.mode2(), s2.mode2());
}

/// The 2M equally spaced real intensity-modulation amplitudes
/// level(j) = j * alpha_max / (2M), j = 1..2M.
class AmplitudeGrid {
   public:
    AmplitudeGrid(double alpha_max, unsigned m) : alpha_max_(alpha_max), m_(m) {
        if (!(alpha_max > 0.0) || !std::isfinite(alpha_max)) {
            throw std::invalid_argument("AmplitudeGrid: alpha_max must be positive and finite");
        }
        if (m < 1) {
            throw std::invalid_argument("AmplitudeGrid: M must be at least 1");
        }
    }

    double alpha_max() const { return alpha_max_; }
    unsigned m() const { return m_; }
    std::size_t size() const { return 2 * static_cast<std::size_t>(m_); }
    double spacing() const { return alpha_max_ / static_cast<double>(size()); }

    /// 1-based level index, as in the protocol description.
    double level(std::size_t j) const {
        if (j < 1 || j > size()) {
            throw std::out_of_range("AmplitudeGrid: level index " + std::to_string(j) + " outside 1.." +
                                    std::to_string(size()));
        }
        // The top level is exactly alpha_max.
        return j == size() ? alpha_max_ : static_cast<double>(j) * spacing();
    }

    std::vector<double> levels() const {
        std::vector<double> out;
        out.reserve(size());
        for (std::size_t j = 1; j <= size(); ++j) {
            out.push_back(level(j));
        }
        return out;
    }

    /// All levels multiplied by `scale`, as coherent states (index 0 is level 1).
    std::vector<CoherentState> states(double scale = 1.0) const {
        std::vector<CoherentState> out;
        out.reserve(size());
        for (std::size_t j = 1; j <= size(); ++j) {
            out.emplace_back(scale * level(j));
        }
        return out;
    }

   private:
    double alpha_max_;
    unsigned m_;
};

inline AmplitudeGrid build_grid(double alpha_max, unsigned m) { return AmplitudeGrid(alpha_max, m); }

/// Hermitian matrix of pairwise overlaps G_ij = <psi_i|psi_j>.
class GramMatrix {
   public:
    explicit GramMatrix(ComplexMatrix entries) : g_(std::move(entries)) {
        if (g_.rows() != g_.cols()) {
            throw std::invalid_argument("GramMatrix: must be square");
        }
    }
    Eigen::Index dimension() const { return g_.rows(); }
    const ComplexMatrix &matrix() const { return g_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return g_(i, j); }

   private:
    ComplexMatrix g_;
};

inline GramMatrix gram_matrix(std::span<const CoherentState> states) {
    if (states.empty()) {
        throw std::invalid_argument("gram_matrix: empty constellation");
    }
    const auto n = static_cast<Eigen::Index>(states.size());
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g(i, j) = coherent_overlap(states[i], states[j]);
            g(j, i) = std::conj(g(i, j));
        }
    }
    return GramMatrix(std::move(g));
}

/// Relative cutoff below which Gram eigenvalues are treated as zero.
inline constexpr double kPseudoInverseCutoff = 1e-12;

struct HermitianRoots {
    ComplexMatrix sqrt;
    ComplexMatrix inv_sqrt;
    RealVector eigenvalues;  // ascending
    std::size_t rank_deficiency = 0;
};

/// G^{1/2} and the pseudo-inverse G^{-1/2} of a positive semidefinite matrix.
/// Eigenvalues below kPseudoInverseCutoff * lambda_max are reported in
/// rank_deficiency and excluded from the inverse root. The forward root keeps
/// them (negative round-off is clamped to zero): on dense grids they are real
/// and dropping them moves span-basis results by about 1e-7.
inline HermitianRoots hermitian_sqrt_and_invsqrt(const ComplexMatrix &m) {
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_sqrt_and_invsqrt: eigensolver did not converge");
    }
    const RealVector &lambda = es.eigenvalues();
    const double lambda_max = lambda.size() ? lambda.maxCoeff() : 0.0;
    const double cut = kPseudoInverseCutoff * std::max(lambda_max, 0.0);

    RealVector root(lambda.size());
    RealVector inv_root(lambda.size());
    std::size_t deficient = 0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        const double l = lambda(k);
        root(k) = l > 0.0 ? std::sqrt(l) : 0.0;
        if (l > cut && l > 0.0) {
            inv_root(k) = 1.0 / root(k);
        } else {
            inv_root(k) = 0.0;
            ++deficient;
        }
    }
    const ComplexMatrix &v = es.eigenvectors();
    HermitianRoots out;
    out.sqrt = v * root.cast<Complex>().asDiagonal() * v.adjoint();
    out.inv_sqrt = v * inv_root.cast<Complex>().asDiagonal() * v.adjoint();
    out.eigenvalues = lambda;
    out.rank_deficiency = deficient;
    return out;
}

inline HermitianRoots hermitian_sqrt_and_invsqrt(const GramMatrix &g) { return hermitian_sqrt_and_invsqrt(g.matrix()); }

/// Weighted selection of constellation members.
class StateMixture {
   public:
    struct Term {
        double weight;
        std::size_t state_index;
    };

    StateMixture() = default;
    explicit StateMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
        double total = 0.0;
        for (const auto &t : terms_) {
            if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
                throw std::invalid_argument("StateMixture: weights must be finite and non-negative");
            }
            total += t.weight;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("StateMixture: weights sum to " + std::to_string(total) + ", expected 1");
        }
    }

    /// Equal weights over the given indices.
    static StateMixture uniform(std::span<const std::size_t> indices) {
        if (indices.empty()) {
            throw std::invalid_argument("StateMixture::uniform: no states");
        }
        std::vector<Term> terms;
        const double w = 1.0 / static_cast<double>(indices.size());
        for (auto i : indices) {
            terms.push_back({w, i});
        }
        return StateMixture(std::move(terms));
    }

    static StateMixture pure(std::size_t index) { return StateMixture({{1.0, index}}); }

    const std::vector<Term> &terms() const { return terms_; }

   private:
    std::vector<Term> terms_;
};

/// Orthonormal coordinates for the span of a constellation. Member i has
/// coordinates given by column i of G^{1/2}; those columns reproduce every
/// pairwise overlap.
class SpanBasis {
   public:
    explicit SpanBasis(std::vector<CoherentState> constellation)
        : constellation_(std::move(constellation)), gram_(gram_matrix(constellation_)) {
        roots_ = hermitian_sqrt_and_invsqrt(gram_);
    }

    const std::vector<CoherentState> &constellation() const { return constellation_; }
    const GramMatrix &gram() const { return gram_; }
    const HermitianRoots &roots() const { return roots_; }
    Eigen::Index dimension() const { return gram_.dimension(); }
    std::size_t rank_deficiency() const { return roots_.rank_deficiency; }

    /// Coordinates of constellation member `i`.
    ComplexVector coordinates(std::size_t i) const {
        if (i >= constellation_.size()) {
            throw std::out_of_range("SpanBasis: state index " + std::to_string(i) + " out of range");
        }
        return roots_.sqrt.col(static_cast<Eigen::Index>(i));
    }

    bool same_span(const SpanBasis &other) const {
        return this == &other || constellation_ == other.constellation_;
    }

   private:
    std::vector<CoherentState> constellation_;
    GramMatrix gram_;
    HermitianRoots roots_;
};

/// A Hermitian operator supported on the span of a constellation.
class SpanOperator {
   public:
    SpanOperator(std::shared_ptr<const SpanBasis> basis, ComplexMatrix coefficients)
        : basis_(std::move(basis)), m_(std::move(coefficients)) {
        if (!basis_ || m_.rows() != basis_->dimension() || m_.cols() != basis_->dimension()) {
            throw std::invalid_argument("SpanOperator: coefficient matrix does not match the span");
        }
    }

    const SpanBasis &basis() const { return *basis_; }
    const std::shared_ptr<const SpanBasis> &basis_ptr() const { return basis_; }
    const ComplexMatrix &matrix() const { return m_; }
    Eigen::Index dimension() const { return m_.rows(); }
    std::size_t rank_deficiency() const { return basis_->rank_deficiency(); }

    Complex trace() const { return m_.trace(); }

    RealVector eigenvalues() const {
        const ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
        return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    }

    bool compatible_with(const SpanOperator &other) const { return basis_->same_span(*other.basis_); }

    /// Tr(this * other).
    Complex trace_product(const SpanOperator &other) const {
        if (!compatible_with(other)) {
            throw std::invalid_argument("SpanOperator: operators live on different spans");
        }
        return (m_ * other.m_).trace();
    }

   private:
    std::shared_ptr<const SpanBasis> basis_;
    ComplexMatrix m_;
};

inline SpanOperator mixture_in_span(const StateMixture &mix, std::shared_ptr<const SpanBasis> basis) {
    const auto n = basis->dimension();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (const auto &t : mix.terms()) {
        const ComplexVector c = basis->coordinates(t.state_index);
        rho.noalias() += t.weight * (c * c.adjoint());
    }
    return SpanOperator(std::move(basis), std::move(rho));
}

inline SpanOperator mixture_in_span(const StateMixture &mix, std::vector<CoherentState> constellation) {
    return mixture_in_span(mix, std::make_shared<const SpanBasis>(std::move(constellation)));
}

/// Truncated number-basis expansion of a coherent state.
struct FockVector {
    std::vector<Complex> coefficients;
    double truncation_mass = 0.0;  // 1 - sum |c_n|^2

    static constexpr double kWarnMass = 1e-10;
    bool truncation_warning() const { return truncation_mass > kWarnMass; }
};

/// c_n = e^{-|a|^2/2} a^n / sqrt(n!), n = 0..n_max.
inline FockVector fock_amplitudes(ComplexAmplitude a, std::size_t n_max) {
    FockVector out;
    out.coefficients.resize(n_max + 1);
    Complex c = std::exp(-0.5 * std::norm(a));
    double mass = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        out.coefficients[n] = c;
        mass += std::norm(c);
        c *= a / std::sqrt(static_cast<double>(n + 1));
    }
    out.truncation_mass = std::max(0.0, 1.0 - mass);
    return out;
}

}  // namespace ykqkd
