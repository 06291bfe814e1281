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


/**
 * @file
 * Fidelity between the reduced elem-slot state of an algorithm's output and
 * the target distribution state sum_i sqrt(c_i/M)|i>.
 */
#pragma once

#include <vector>

#include "qds/database.hpp"
#include "qds/registers.hpp"

namespace qds {

struct UhlmannResult {
  /// F(rho, psi) = <psi|rho|psi>, rho the elem-slot reduced state.
  double fidelity = 0.0;
  /// (sum_i sqrt(c_i/M) ||phi_i||)^2, which is at least `fidelity`.
  double branch_bound = 0.0;
  /// ||phi_i|| for each element.
  std::vector<double> branch_norms;
  /// sum_i sqrt(c_i/M)|i>|xi>, the purification of psi closest to the
  /// input. Its overlap with the input is sqrt(fidelity), real and >= 0.
  StateVector purification;
};

UhlmannResult fidelity_uhlmann(const StateVector& state, const DistributedDatabase& db);

}  // namespace qds
