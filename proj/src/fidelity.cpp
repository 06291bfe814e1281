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


#include "qds/fidelity.hpp"

#include <cmath>

#include "detail/slot_partition.hpp"
#include "qds/error.hpp"

namespace qds {

UhlmannResult fidelity_uhlmann(const StateVector& state, const DistributedDatabase& db) {
  const auto& stats = db.stats();
  if (stats.total == 0) fail(ErrorCode::empty_database, "fidelity needs M > 0");
  const auto& layout = state.layout();
  const std::size_t elem = layout.index_of(slot::elem);
  if (layout.slot_dim(elem) != db.universe()) {
    fail(ErrorCode::shape, "elem slot dimension does not match the universe");
  }
  const std::size_t selected[] = {elem};
  const auto part = detail::partition(layout, selected);
  const auto amps = state.amplitudes();
  const double total = static_cast<double>(stats.total);

  std::vector<double> weight(db.universe());
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] = std::sqrt(static_cast<double>(stats.element_totals[i]) / total);
  }

  // v = sum_i sqrt(c_i/M) phi_i over the rest of the register.
  std::vector<Amplitude> v(part.rest_offsets.size());
  UhlmannResult result{0.0, 0.0, std::vector<double>(db.universe()), StateVector(layout)};
  double bound = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    double sq = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      const Amplitude a = amps[part.rest_offsets[r] + part.joint_offsets[i]];
      sq += std::norm(a);
      v[r] += weight[i] * a;
    }
    result.branch_norms[i] = std::sqrt(sq);
    bound += weight[i] * result.branch_norms[i];
  }
  double vnorm_sq = 0.0;
  for (const auto& a : v) vnorm_sq += std::norm(a);
  result.fidelity = vnorm_sq;
  result.branch_bound = bound * bound;

  auto out = result.purification.amplitudes();
  out[0] = 0.0;
  const double vnorm = std::sqrt(vnorm_sq);
  for (std::size_t r = 0; r < v.size(); ++r) {
    // With v = 0 every xi is equally close; use the all-zero rest state.
    const Amplitude xi = vnorm > 0.0 ? v[r] / vnorm : Amplitude(r == 0 ? 1.0 : 0.0);
    for (std::size_t i = 0; i < weight.size(); ++i) {
      out[part.rest_offsets[r] + part.joint_offsets[i]] = weight[i] * xi;
    }
  }
  return result;
}

}  // namespace qds
