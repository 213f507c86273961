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

#include "ykqkd/quantum_core.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fock_oracle.hpp"
#include "gtest/gtest.h"

using namespace ykqkd;

namespace {

std::vector<CoherentState> random_constellation(std::mt19937_64 &rng, std::size_t n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<CoherentState> out;
    while (out.size() < n) {
        const Complex a{u(rng), u(rng)};
        if (std::abs(a) <= radius) {
            out.emplace_back(a);
        }
    }
    return out;
}

}  // namespace

TEST(coherent_overlap, identity_is_exactly_one) {
    for (Complex a : {Complex{0, 0}, Complex{1.5, -0.25}, Complex{12, 7}}) {
        EXPECT_EQ(coherent_overlap(a, a), Complex(1.0, 0.0));
    }
}

TEST(coherent_overlap, vacuum_against_unit_amplitudes) {
    EXPECT_NEAR(coherent_overlap(Complex{0, 0}, Complex{1, 0}).real(), 0.606530659712633423603799534991, 1e-15);
    EXPECT_NEAR(coherent_overlap(Complex{0, 0}, Complex{1, 0}).imag(), 0.0, 1e-15);
    const Complex c = coherent_overlap(Complex{0, 0}, Complex{0, 1});
    EXPECT_NEAR(std::abs(c), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(std::norm(c), std::exp(-1.0), 1e-15);
}

TEST(coherent_overlap, hermitian_symmetry_and_displacement_invariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)}, shift{u(rng), u(rng)};
        const Complex ab = coherent_overlap(a, b);
        EXPECT_NEAR(std::abs(ab - std::conj(coherent_overlap(b, a))), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(coherent_overlap(a + shift, b + shift)), std::abs(ab), 1e-13);
        EXPECT_NEAR(std::norm(ab), std::exp(-std::norm(a - b)), 1e-13);
    }
}

TEST(coherent_state, rejects_non_finite_amplitude) {
    EXPECT_THROW(CoherentState(Complex{NAN, 0}), std::invalid_argument);
    EXPECT_THROW(CoherentState(Complex{0, INFINITY}), std::invalid_argument);
}

TEST(two_mode, zero_phase_splits_evenly) {
    const auto s = two_mode_cipher_state(Complex{2, 0}, 0, 0);
    EXPECT_NEAR(std::abs(s.mode1().amplitude() - Complex(std::numbers::sqrt2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.mode2().amplitude() - Complex(std::numbers::sqrt2, 0)), 0.0, 1e-15);
}

TEST(two_mode, pi_bit_phase_rotates_modes_oppositely) {
    const auto s = two_mode_cipher_state(Complex{std::numbers::sqrt2, 0}, std::numbers::pi, 0);
    EXPECT_NEAR(std::abs(s.mode1().amplitude() - Complex(0, -1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.mode2().amplitude() - Complex(0, 1)), 0.0, 1e-15);
}

TEST(two_mode, photon_number_is_phase_independent) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 100; ++i) {
        const Complex a{u(rng), u(rng)};
        const auto s = two_mode_cipher_state(a, u(rng), u(rng));
        EXPECT_NEAR(s.mean_photon_number(), std::norm(a), 1e-12 * (1 + std::norm(a)));
    }
}

TEST(two_mode, overlap_closed_form) {
    const auto a = two_mode_cipher_state(Complex{1.3, 0}, 0.2, 0.5);
    EXPECT_NEAR(std::abs(two_mode_overlap(a, a) - Complex(1, 0)), 0.0, 1e-15);

    const auto b = two_mode_cipher_state(Complex{1, 0}, 0, 0);
    const auto c = two_mode_cipher_state(Complex{1, 0}, std::numbers::pi, std::numbers::pi);
    EXPECT_NEAR(std::abs(two_mode_overlap(b, c)), 0.135335283236612691893999494972, 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ph(-7, 7), amp(0, 2);
    for (int i = 0; i < 50; ++i) {
        const Complex alpha = std::polar(amp(rng), ph(rng));
        const auto s1 = two_mode_cipher_state(alpha, ph(rng), ph(rng));
        const auto s2 = two_mode_cipher_state(alpha, ph(rng), ph(rng));
        const double dphi = s1.total_phase() - s2.total_phase();
        EXPECT_NEAR(std::abs(two_mode_overlap(s1, s2)), std::exp(-std::norm(alpha) * (1 - std::cos(dphi / 2))), 1e-13);
    }
}

TEST(two_mode, overlap_matches_truncated_fock_product) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ph(-3.2, 3.2), amp(0, 2);
    for (int i = 0; i < 40; ++i) {
        const auto s1 = two_mode_cipher_state(std::polar(amp(rng), ph(rng)), ph(rng), ph(rng));
        const auto s2 = two_mode_cipher_state(std::polar(amp(rng), ph(rng)), ph(rng), ph(rng));
        const Complex fock = oracle::fock_overlap(s1.mode1().amplitude(), s2.mode1().amplitude(), 40) *
                             oracle::fock_overlap(s1.mode2().amplitude(), s2.mode2().amplitude(), 40);
        EXPECT_NEAR(std::abs(two_mode_overlap(s1, s2) - fock), 0.0, 1e-8);
    }
}

TEST(amplitude_grid, levels) {
    const auto g = build_grid(10, 5);
    ASSERT_EQ(g.size(), 10u);
    for (std::size_t j = 1; j <= 10; ++j) {
        EXPECT_DOUBLE_EQ(g.level(j), static_cast<double>(j));
    }
    const auto g1 = build_grid(3.7, 1);
    EXPECT_DOUBLE_EQ(g1.level(1), 3.7 / 2);
    EXPECT_EQ(g1.level(2), 3.7);
}

TEST(amplitude_grid, spacing_and_top_level) {
    for (unsigned m : {1u, 3u, 7u, 64u}) {
        const AmplitudeGrid g(0.3, m);
        const auto lv = g.levels();
        EXPECT_EQ(lv.back(), 0.3);
        for (std::size_t i = 1; i < lv.size(); ++i) {
            EXPECT_GT(lv[i], lv[i - 1]);
            EXPECT_NEAR(lv[i] - lv[i - 1], 0.3 / (2.0 * m), 1e-15);
        }
    }
}

TEST(amplitude_grid, rejects_bad_parameters) {
    EXPECT_THROW(build_grid(0, 2), std::invalid_argument);
    EXPECT_THROW(build_grid(-1, 2), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 0), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 2).level(5), std::out_of_range);
}

TEST(gram_matrix, small_cases) {
    const std::vector<CoherentState> one{CoherentState(1.2)};
    EXPECT_EQ(gram_matrix(one).matrix(), ComplexMatrix::Identity(1, 1));

    const std::vector<CoherentState> two{CoherentState(0.3), CoherentState(1.8)};
    EXPECT_NEAR(std::abs(gram_matrix(two)(0, 1)), std::exp(-1.5 * 1.5 / 2), 1e-15);

    const std::vector<CoherentState> far{CoherentState(0.0), CoherentState(15.0), CoherentState(30.0)};
    EXPECT_TRUE(gram_matrix(far).matrix().isApprox(ComplexMatrix::Identity(3, 3), 1e-40));
    EXPECT_THROW(gram_matrix(std::vector<CoherentState>{}), std::invalid_argument);
}

TEST(gram_matrix, positive_semidefinite_property) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto states = random_constellation(rng, 2 + trial % 12, 3.0);
        const auto g = gram_matrix(states).matrix();
        EXPECT_TRUE(g.isApprox(g.adjoint()));
        const RealVector l = oracle::hermitian_eigenvalues(g);
        EXPECT_GE(l.minCoeff(), -1e-12);
    }
    for (unsigned m : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
        const RealVector l = oracle::hermitian_eigenvalues(gram_matrix(AmplitudeGrid(4, m).states()).matrix());
        EXPECT_GE(l.minCoeff(), -1e-12);
    }
}

TEST(hermitian_roots, identity) {
    const auto r = hermitian_sqrt_and_invsqrt(ComplexMatrix::Identity(4, 4));
    EXPECT_TRUE(r.sqrt.isApprox(ComplexMatrix::Identity(4, 4)));
    EXPECT_TRUE(r.inv_sqrt.isApprox(ComplexMatrix::Identity(4, 4)));
    EXPECT_EQ(r.rank_deficiency, 0u);
}

TEST(hermitian_roots, two_by_two_closed_form) {
    for (double c : {0.0, 0.2, 0.7, 0.999}) {
        ComplexMatrix g(2, 2);
        g << 1, c, c, 1;
        const auto r = hermitian_sqrt_and_invsqrt(g);
        EXPECT_NEAR(r.eigenvalues(0), 1 - c, 1e-15);
        EXPECT_NEAR(r.eigenvalues(1), 1 + c, 1e-15);
        EXPECT_NEAR((r.sqrt * r.sqrt - g).norm(), 0.0, 1e-12);
        EXPECT_NEAR((r.inv_sqrt * g * r.inv_sqrt - ComplexMatrix::Identity(2, 2)).norm(), 0.0, 1e-10);
        // sqrt of [[1,c],[c,1]] has diagonal (sqrt(1+c) + sqrt(1-c))/2.
        EXPECT_NEAR(r.sqrt(0, 0).real(), 0.5 * (std::sqrt(1 + c) + std::sqrt(1 - c)), 1e-14);
    }
}

TEST(hermitian_roots, duplicate_state_flags_rank_deficiency) {
    const std::vector<CoherentState> dup{CoherentState(1.0), CoherentState(1.0)};
    const auto r = hermitian_sqrt_and_invsqrt(gram_matrix(dup));
    EXPECT_EQ(r.rank_deficiency, 1u);
    EXPECT_NEAR((r.sqrt * r.sqrt - gram_matrix(dup).matrix()).norm(), 0.0, 1e-12);
}

TEST(state_mixture, validates_weights) {
    EXPECT_THROW(StateMixture({{0.5, 0}, {0.4, 1}}), std::invalid_argument);
    EXPECT_THROW(StateMixture({{1.5, 0}, {-0.5, 1}}), std::invalid_argument);
    EXPECT_NO_THROW(StateMixture({{0.25, 0}, {0.75, 1}}));
}

TEST(mixture_in_span, pure_state_is_rank_one_projector) {
    const std::vector<CoherentState> c{CoherentState(0.5), CoherentState(Complex{1, 1}), CoherentState(2.0)};
    const auto rho = mixture_in_span(StateMixture::pure(1), c);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR((rho.matrix() * rho.matrix() - rho.matrix()).norm(), 0.0, 1e-12);
    const RealVector l = rho.eigenvalues();
    EXPECT_NEAR(l(l.size() - 1), 1.0, 1e-12);
    EXPECT_NEAR(l.head(l.size() - 1).cwiseAbs().sum(), 0.0, 1e-12);
}

TEST(mixture_in_span, equal_two_state_mixture_eigenvalues) {
    // Levels 1 and M+1 of a grid with M = 4, alpha_max = 4.
    const AmplitudeGrid g(4, 4);
    const std::vector<CoherentState> c{CoherentState(g.level(1)), CoherentState(g.level(5))};
    const std::size_t idx[] = {0, 1};
    const auto rho = mixture_in_span(StateMixture::uniform(idx), c);
    const double s = std::abs(coherent_overlap(c[0], c[1]));
    const RealVector l = rho.eigenvalues();
    EXPECT_NEAR(l(0), (1 - s) / 2, 1e-12);
    EXPECT_NEAR(l(1), (1 + s) / 2, 1e-12);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_LE(rho.trace_product(rho).real(), 1.0);
}

TEST(mixture_in_span, trace_product_matches_direct_overlaps_and_fock) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const auto states = random_constellation(rng, n, 3.0);
        auto basis = std::make_shared<const SpanBasis>(states);

        auto random_mix = [&] {
            std::vector<StateMixture::Term> t;
            double total = 0;
            for (std::size_t i = 0; i < n; ++i) {
                t.push_back({w(rng), i});
                total += t.back().weight;
            }
            for (auto &x : t) {
                x.weight /= total;
            }
            // Renormalize the last weight so the sum is exact.
            double head = 0;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                head += t[i].weight;
            }
            t.back().weight = 1.0 - head;
            return StateMixture(t);
        };
        const StateMixture a = random_mix();
        const StateMixture b = random_mix();
        const auto rho = mixture_in_span(a, basis);
        const auto sigma = mixture_in_span(b, basis);

        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
        EXPECT_GE(rho.eigenvalues().minCoeff(), -1e-10);
        EXPECT_LE(rho.trace_product(rho).real(), 1.0 + 1e-12);

        double direct = 0;
        for (const auto &x : a.terms()) {
            for (const auto &y : b.terms()) {
                direct += x.weight * y.weight * std::norm(coherent_overlap(states[x.state_index], states[y.state_index]));
            }
        }
        EXPECT_NEAR(rho.trace_product(sigma).real(), direct, 1e-10);

        if (basis->rank_deficiency() == 0) {
            std::vector<oracle::Weighted> fa, fb;
            for (const auto &x : a.terms()) fa.push_back({x.weight, x.state_index});
            for (const auto &y : b.terms()) fb.push_back({y.weight, y.state_index});
            const auto frho = oracle::fock_density(states, fa, 60);
            const auto fsig = oracle::fock_density(states, fb, 60);
            EXPECT_NEAR(rho.trace_product(sigma).real(), (frho * fsig).trace().real(), 1e-8);
            const RealVector span_eigs = rho.eigenvalues();
            const RealVector fock_eigs = oracle::hermitian_eigenvalues(frho);
            for (Eigen::Index k = 0; k < span_eigs.size(); ++k) {
                EXPECT_NEAR(span_eigs(span_eigs.size() - 1 - k), fock_eigs(fock_eigs.size() - 1 - k), 1e-8);
            }
        }
    }
}

TEST(mixture_in_span, rejects_invalid_index) {
    const std::vector<CoherentState> c{CoherentState(0.5)};
    EXPECT_THROW(mixture_in_span(StateMixture::pure(3), c), std::out_of_range);
}

TEST(fock_amplitudes, vacuum) {
    const auto f = fock_amplitudes(Complex{0, 0}, 10);
    EXPECT_EQ(f.coefficients[0], Complex(1, 0));
    for (std::size_t n = 1; n <= 10; ++n) {
        EXPECT_EQ(f.coefficients[n], Complex(0, 0));
    }
    EXPECT_FALSE(f.truncation_warning());
}

TEST(fock_amplitudes, normalization_and_truncation_warning) {
    const auto f = fock_amplitudes(Complex{1, 0}, 40);
    double s = 0;
    for (auto c : f.coefficients) s += std::norm(c);
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_FALSE(f.truncation_warning());
    EXPECT_TRUE(fock_amplitudes(Complex{5, 0}, 10).truncation_warning());
}

TEST(fock_amplitudes, recurrence_matches_closed_form_and_overlap) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.1, 2.1);
    for (int i = 0; i < 50; ++i) {
        const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const auto fa = fock_amplitudes(a, 60);
        const auto fb = fock_amplitudes(b, 60);
        const auto ref = oracle::fock_vector(a, 60);
        Complex inner{0, 0};
        for (std::size_t n = 0; n <= 60; ++n) {
            EXPECT_NEAR(std::abs(fa.coefficients[n] - ref(static_cast<Eigen::Index>(n))), 0.0, 1e-13);
            inner += std::conj(fa.coefficients[n]) * fb.coefficients[n];
        }
        EXPECT_NEAR(std::abs(inner - coherent_overlap(a, b)), 0.0, 1e-8);
    }
}
