// Copyright 2026 The qds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Fixtures and independent reference computations shared by the test
// binaries. Nothing here calls into the code it is used to check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "qds/database.hpp"
#include "qds/registers.hpp"

namespace qds::testing {

// N=4, nu=4, machine 1 = {1:2, 2:1}, machine 2 = {2:1, 3:1} (1-based).
inline DistributedDatabase instance_a() {
  return DistributedDatabase(4, 4, {{2, 1, 0, 0}, {0, 1, 1, 0}});
}

inline DistributedDatabase single_element(std::size_t universe, std::size_t element,
                                          Count capacity = 1, Count count = 1) {
  std::vector<Count> row(universe, 0);
  row[element] = count;
  return DistributedDatabase(universe, capacity, {row});
}

inline StateVector random_state(const RegisterLayout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> amps(layout.dimension());
  for (auto& a : amps) a = {gauss(rng), gauss(rng)};
  StateVector s(layout, std::move(amps));
  s.normalize();
  return s;
}

// Multiplicities drawn so every element total stays within nu and M >= 1.
inline DistributedDatabase random_database(std::mt19937_64& rng, std::size_t universe,
                                           std::size_t machines, Count capacity) {
  std::uniform_int_distribution<Count> draw(0, capacity);
  while (true) {
    std::vector<std::vector<Count>> rows(machines, std::vector<Count>(universe, 0));
    Count total = 0;
    for (std::size_t i = 0; i < universe; ++i) {
      Count left = draw(rng);
      for (std::size_t j = 0; j < machines; ++j) {
        std::uniform_int_distribution<Count> part(0, left);
        const Count c = j + 1 == machines ? left : part(rng);
        rows[j][i] = c;
        left -= c;
        total += c;
      }
    }
    if (total > 0) return DistributedDatabase(universe, capacity, std::move(rows));
  }
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Reduced density matrix of the elem slot by explicit partial trace over
// every other slot, walking full coordinates.
inline Eigen::MatrixXcd reduced_elem_density(const StateVector& state) {
  const auto& layout = state.layout();
  const std::size_t e = layout.index_of(slot::elem);
  const std::size_t n = layout.slot_dim(e);
  const std::size_t rest = layout.dimension() / n;
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n, rest);
  std::vector<std::size_t> seen(n, 0);
  for (std::size_t idx = 0; idx < layout.dimension(); ++idx) {
    const std::size_t i = layout.unflatten(idx)[e];
    psi(i, seen[i]++) = state[idx];
  }
  return psi * psi.adjoint();
}

// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 through Hermitian eigendecompositions.
inline double eigen_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(rho);
  Eigen::VectorXd ev = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_rho =
      er.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() * er.eigenvectors().adjoint();
  const Eigen::MatrixXcd inner = sqrt_rho * sigma * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ei(0.5 * (inner + inner.adjoint()));
  // Round-off eigenvalues near 1e-16 would add 1e-8 each after the square
  // root, so anything below the numerical rank cutoff counts as zero.
  const Eigen::VectorXd lambda = ei.eigenvalues();
  const double cutoff = 1e-13 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  double trace = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) trace += std::sqrt(lambda(i));
  }
  return trace * trace;
}

inline Eigen::MatrixXcd target_density(const DistributedDatabase& db) {
  const auto& c = db.stats().element_totals;
  const double m = static_cast<double>(db.stats().total);
  Eigen::VectorXcd v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v(i) = std::sqrt(static_cast<double>(c[i]) / m);
  return v * v.adjoint();
}

// C(n, r) by Pascal's rule.
inline std::vector<std::vector<unsigned long long>> pascal(std::size_t rows) {
  std::vector<std::vector<unsigned long long>> t(rows + 1);
  for (std::size_t n = 0; n <= rows; ++n) {
    t[n].assign(n + 1, 1);
    for (std::size_t r = 1; r < n; ++r) t[n][r] = t[n - 1][r - 1] + t[n - 1][r];
  }
  return t;
}

}  // namespace qds::testing
