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


#include <Eigen/Dense>
#include <catch_amalgamated.hpp>
#include <numbers>

#include "qds/error.hpp"
#include "qds/sampler.hpp"
#include "support.hpp"

using namespace qds;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

// Amplitude amplification restricted to span{good, bad}, where the start
// vector is sin(theta)|good> + cos(theta)|bad>. Returns |bad amplitude|
// after the initial preparation, `standard` iterations with phases (pi, pi)
// and one iteration with (phi, varphi).
double residual_bad_amplitude(double theta, std::size_t standard, double phi, double varphi) {
  using C = std::complex<double>;
  Eigen::Vector2cd start(std::sin(theta), std::cos(theta));
  auto iterate = [&](const Eigen::Vector2cd& v, double chi_phase, double pi_phase) {
    Eigen::Matrix2cd s_chi = Eigen::Matrix2cd::Identity();
    s_chi(0, 0) = std::polar(1.0, chi_phase);
    const Eigen::Matrix2cd s_pi = Eigen::Matrix2cd::Identity() +
                                  (std::polar(1.0, pi_phase) - C(1.0)) * start * start.adjoint();
    return Eigen::Vector2cd(-(s_pi * s_chi * v));
  };
  Eigen::Vector2cd v = start;
  for (std::size_t k = 0; k < standard; ++k) v = iterate(v, kPi, kPi);
  v = iterate(v, phi, varphi);
  return std::abs(v(1));
}

}  // namespace

TEST_CASE("theta = pi/4 gives phases (pi/2, pi/2)", "[schedule]") {
  const auto s = schedule_for_ratio(0.5);
  CHECK_THAT(s.theta, WithinAbs(kPi / 4, 1e-15));
  CHECK(s.iterations == 0);
  CHECK_FALSE(s.degenerate);
  CHECK_THAT(s.phase_chi, WithinAbs(kPi / 2, 1e-12));
  CHECK_THAT(s.phase_pi, WithinAbs(kPi / 2, 1e-12));
  CHECK(s.residual <= 1e-10);
}

TEST_CASE("theta = pi/6 is the exact Grover case", "[schedule]") {
  const auto s = schedule_for_ratio(0.25);
  CHECK_THAT(s.theta, WithinAbs(kPi / 6, 1e-15));
  CHECK(s.iterations == 1);
  CHECK(s.degenerate);
  CHECK(s.phase_chi == 0.0);
  CHECK(s.phase_pi == 0.0);
}

TEST_CASE("a saturated database needs no iterations", "[schedule]") {
  const auto s = schedule_for_ratio(1.0);
  CHECK_THAT(s.theta, WithinAbs(kPi / 2, 1e-15));
  CHECK(s.iterations == 0);
  CHECK(s.degenerate);
}

TEST_CASE("solved phases drive the bad amplitude to zero", "[schedule]") {
  for (int k = 1; k <= 400; ++k) {
    const double ratio = k / 400.0;
    const auto s = schedule_for_ratio(ratio);
    INFO("ratio " << ratio);
    CHECK(s.iterations == static_cast<std::size_t>(std::floor(kPi / (4 * s.theta) - 0.5 + 1e-9)));
    CHECK(s.residual <= 1e-10);
    CHECK(matching_residual(s.theta, s.iterations, s.phase_chi, s.phase_pi) <= 1e-10);
    CHECK(residual_bad_amplitude(s.theta, s.iterations, s.phase_chi, s.phase_pi) <= 1e-10);
  }
}

TEST_CASE("the numerical solver agrees with the closed form", "[schedule]") {
  for (const double ratio : {0.03, 0.11, 0.3, 0.5, 0.7, 0.93}) {
    const auto s = schedule_for_ratio(ratio);
    const auto numeric = solve_phases_numerically(s.theta, s.iterations);
    REQUIRE(numeric.has_value());
    CHECK(matching_residual(s.theta, s.iterations, numeric->first, numeric->second) <= 1e-10);
    CHECK(residual_bad_amplitude(s.theta, s.iterations, numeric->first, numeric->second) <=
          1e-9);
  }
}

TEST_CASE("schedule errors", "[schedule]") {
  CHECK_THROWS_MATCHES(schedule_for_ratio(0.0), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::empty_database; }));
  CHECK_THROWS_MATCHES(schedule_for_ratio(1.5), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::capacity; }));
  const DistributedDatabase empty(2, 1, {{0, 0}});
  CHECK_THROWS_AS(build_schedule(empty), Error);
  const auto a = build_schedule(testing::instance_a());
  CHECK_THAT(std::sin(a.theta) * std::sin(a.theta), WithinAbs(5.0 / 16.0, 1e-15));
  CHECK(a.iterations == 0);
}
