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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qds/registers.hpp"

namespace qds::detail {

// Splits a layout into selected slots and the rest. Every full index is
// rest_offsets[r] + joint_offsets[j] for exactly one (r, j), which lets the
// engine sweep a state without per-index division.
struct SlotPartition {
  std::vector<std::size_t> joint_dims;
  std::vector<std::size_t> joint_offsets;
  std::vector<std::size_t> rest_offsets;

  std::size_t joint_size() const { return joint_offsets.size(); }

  // Mixed-radix decode, last selected slot fastest.
  void decode(std::size_t joint, std::span<std::size_t> coords) const {
    for (std::size_t k = joint_dims.size(); k-- > 0;) {
      coords[k] = joint % joint_dims[k];
      joint /= joint_dims[k];
    }
  }

  std::size_t encode(std::span<const std::size_t> coords) const {
    std::size_t joint = 0;
    for (std::size_t k = 0; k < joint_dims.size(); ++k) {
      joint = joint * joint_dims[k] + coords[k];
    }
    return joint;
  }
};

SlotPartition partition(const RegisterLayout& layout,
                        std::span<const std::size_t> selected);

}  // namespace qds::detail
