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

// Truncated number-basis reference computations. Nothing here goes through
// the Gram/span machinery; coefficients come from the closed form rather
// than the library's recurrence.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ykqkd/quantum_core.hpp"

namespace ykqkd::oracle {

inline Eigen::VectorXcd fock_vector(std::complex<double> a, std::size_t n_max) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n_max + 1));
    const double r = std::abs(a);
    const double phase = std::arg(a);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        if (r == 0.0) {
            v(static_cast<Eigen::Index>(n)) = n == 0 ? 1.0 : 0.0;
            continue;
        }
        const double mag = std::exp(-0.5 * r * r + nd * std::log(r) - 0.5 * std::lgamma(nd + 1.0));
        v(static_cast<Eigen::Index>(n)) = std::polar(mag, nd * phase);
    }
    return v;
}

inline std::complex<double> fock_overlap(std::complex<double> a, std::complex<double> b, std::size_t n_max) {
    return fock_vector(a, n_max).dot(fock_vector(b, n_max));
}

struct Weighted {
    double weight;
    std::size_t index;
};

inline Eigen::MatrixXcd fock_density(std::span<const CoherentState> states, std::span<const Weighted> mix,
                                     std::size_t n_max) {
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &t : mix) {
        const Eigen::VectorXcd v = fock_vector(states[t.index].amplitude(), n_max);
        rho += t.weight * v * v.adjoint();
    }
    return rho;
}

inline std::vector<Weighted> uniform(std::span<const std::size_t> idx) {
    std::vector<Weighted> out;
    for (auto i : idx) {
        out.push_back({1.0 / static_cast<double>(idx.size()), i});
    }
    return out;
}

inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd &m) {
    const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

/// 1/2 (1 - || p1 rho1 - (1 - p1) rho0 ||_1) in the number basis.
inline double fock_helstrom(const Eigen::MatrixXcd &rho1, const Eigen::MatrixXcd &rho0, double p1) {
    return 0.5 * (1.0 - hermitian_eigenvalues(p1 * rho1 - (1.0 - p1) * rho0).cwiseAbs().sum());
}

/// Diagonal <psi'_i| S^{-1/2} |psi'_i> of the square-root measurement with
/// psi'_i = sqrt(p_i) psi_i and S = sum_i |psi'_i><psi'_i|, in the number basis.
inline std::vector<double> fock_srm_diagonal(std::span<const CoherentState> states, std::span<const double> priors,
                                             std::size_t n_max) {
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    Eigen::MatrixXcd psi(d, static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        psi.col(static_cast<Eigen::Index>(i)) = std::sqrt(priors[i]) * fock_vector(states[i].amplitude(), n_max);
    }
    const Eigen::MatrixXcd s = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (s + s.adjoint()));
    const Eigen::VectorXd l = es.eigenvalues();
    const double cut = 1e-12 * l.maxCoeff();
    Eigen::VectorXd inv(l.size());
    for (Eigen::Index k = 0; k < l.size(); ++k) {
        inv(k) = l(k) > cut ? 1.0 / std::sqrt(l(k)) : 0.0;
    }
    const Eigen::MatrixXcd s_inv_sqrt = es.eigenvectors() * inv.cast<std::complex<double>>().asDiagonal() *
                                        es.eigenvectors().adjoint();
    const Eigen::MatrixXcd m = psi.adjoint() * s_inv_sqrt * psi;
    std::vector<double> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out.push_back(m(i, i).real());
    }
    return out;
}

inline double fock_srm_error(std::span<const CoherentState> states, std::span<const double> priors, std::size_t n_max) {
    double success = 0.0;
    for (double x : fock_srm_diagonal(states, priors, n_max)) {
        success += x * x;
    }
    return 1.0 - success;
}

}  // namespace ykqkd::oracle
