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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qds/error.hpp"
#include "qds/sampler.hpp"

namespace qds {

namespace {

constexpr double kDegenerateCot = 1e-12;
constexpr double kResidualTolerance = 1e-10;
// m~ within this of an integer is taken to be that integer; keeps the
// exact-Grover angles (theta = pi/6, pi/10, ...) from flooring one short.
constexpr double kFloorSlack = 1e-9;

// e^{i phi} sin(2t) / (-cos(2t) + i cot(varphi/2)), written without the
// cotangent so varphi = 0 gives 0 instead of inf/inf.
std::complex<double> matching_rhs(double theta, double phase_chi, double phase_pi) {
  const double half_s = std::sin(phase_pi / 2.0);
  const double half_c = std::cos(phase_pi / 2.0);
  const std::complex<double> den(-std::cos(2.0 * theta) * half_s, half_c);
  if (std::abs(den) == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return std::polar(1.0, phase_chi) * std::sin(2.0 * theta) * half_s / den;
}

double cot_of_final_angle(double theta, std::size_t iterations) {
  const double angle = static_cast<double>(2 * iterations + 1) * theta;
  return std::cos(angle) / std::sin(angle);
}

}  // namespace

double matching_residual(double theta, std::size_t iterations, double phase_chi,
                         double phase_pi) {
  const auto rhs = matching_rhs(theta, phase_chi, phase_pi);
  return std::abs(std::complex<double>(cot_of_final_angle(theta, iterations), 0.0) - rhs);
}

std::optional<std::pair<double, double>> solve_phases_numerically(double theta,
                                                                  std::size_t iterations) {
  const double target = cot_of_final_angle(theta, iterations);
  auto residual = [&](double chi, double pi_phase) {
    return std::complex<double>(target, 0.0) - matching_rhs(theta, chi, pi_phase);
  };

  constexpr int kStarts = 8;
  constexpr int kSteps = 200;
  constexpr double kH = 1e-7;
  std::optional<std::pair<double, double>> best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kStarts; ++a) {
    for (int b = 1; b <= kStarts; ++b) {
      double x = 2.0 * std::numbers::pi * a / kStarts;
      double y = 2.0 * std::numbers::pi * b / (kStarts + 1);
      for (int step = 0; step < kSteps; ++step) {
        const auto r = residual(x, y);
        if (!std::isfinite(r.real()) || std::abs(r) < 1e-15) break;
        const auto rx = (residual(x + kH, y) - r) / kH;
        const auto ry = (residual(x, y + kH) - r) / kH;
        // Solve J d = -r with J = [[Re rx, Re ry], [Im rx, Im ry]].
        const double det = rx.real() * ry.imag() - ry.real() * rx.imag();
        if (std::abs(det) < 1e-14) break;
        const double dx = (-r.real() * ry.imag() + ry.real() * r.imag()) / det;
        const double dy = (-rx.real() * r.imag() + rx.imag() * r.real()) / det;
        double scale = 1.0;
        while (scale > 1e-6 && !(std::abs(residual(x + scale * dx, y + scale * dy)) <
                                 std::abs(r))) {
          scale /= 2.0;
        }
        x += scale * dx;
        y += scale * dy;
      }
      const double norm = std::abs(residual(x, y));
      if (std::isfinite(norm) && norm < best_norm) {
        best_norm = norm;
        best = {std::remainder(x, 2.0 * std::numbers::pi), std::remainder(y, 2.0 * std::numbers::pi)};
      }
    }
  }
  if (!best || matching_residual(theta, iterations, best->first, best->second) > kResidualTolerance) {
    return std::nullopt;
  }
  return best;
}

AASchedule schedule_for_ratio(double ratio) {
  if (!(ratio > 0.0)) fail(ErrorCode::empty_database, "M = 0, nothing to amplify");
  if (ratio > 1.0 + 1e-12) fail(ErrorCode::capacity, "M exceeds nu * N");
  ratio = std::min(ratio, 1.0);

  AASchedule s;
  s.theta = std::asin(std::sqrt(ratio));
  s.m_tilde = std::numbers::pi / (4.0 * s.theta) - 0.5;
  s.iterations = static_cast<std::size_t>(std::max(0.0, std::floor(s.m_tilde + kFloorSlack)));

  const double cot_l = cot_of_final_angle(s.theta, s.iterations);
  if (cot_l <= kDegenerateCot) {
    s.degenerate = true;
    s.phase_chi = 0.0;
    s.phase_pi = 0.0;
  } else {
    // Make the right-hand side real: phi = arg z with
    // z = -cos 2t + i cot(varphi/2), then |z| = sin 2t tan L.
    const double s2 = std::sin(2.0 * s.theta);
    const double c2 = std::cos(2.0 * s.theta);
    const double tan_l = 1.0 / cot_l;
    const double u2 = s2 * s2 * tan_l * tan_l - c2 * c2;
    const double u = std::sqrt(std::max(0.0, u2));
    s.phase_pi = 2.0 * std::atan2(1.0, u);
    s.phase_chi = std::atan2(u, -c2);
  }
  s.residual = matching_residual(s.theta, s.iterations, s.phase_chi, s.phase_pi);
  if (s.residual > kResidualTolerance) {
    auto numeric = solve_phases_numerically(s.theta, s.iterations);
    if (!numeric) {
      fail(ErrorCode::capacity, "no phases satisfy the matching equation");
    }
    s.phase_chi = numeric->first;
    s.phase_pi = numeric->second;
    s.numeric_fallback = true;
    s.residual = matching_residual(s.theta, s.iterations, s.phase_chi, s.phase_pi);
  }
  return s;
}

AASchedule build_schedule(const DistributedDatabase& db) {
  const auto& stats = db.stats();
  if (stats.total == 0) fail(ErrorCode::empty_database, "M = 0, nothing to sample");
  const double capacity_mass =
      static_cast<double>(db.capacity()) * static_cast<double>(db.universe());
  if (static_cast<double>(stats.total) > capacity_mass) {
    fail(ErrorCode::capacity, "M exceeds nu * N");
  }
  return schedule_for_ratio(static_cast<double>(stats.total) / capacity_mass);
}

}  // namespace qds
