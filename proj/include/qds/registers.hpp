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
 * Composite qudit registers and the dense state-vector engine.
 *
 * A RegisterLayout is an ordered list of named slots. Basis states are
 * flattened in mixed radix with the last-listed slot varying fastest. Every
 * unitary used by the simulator (oracles, rotations, phases, the Fourier map)
 * is applied through the functions declared here; matrices of size dim^2 are
 * never built.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qds {

using Amplitude = std::complex<double>;

/// Norm and orthogonality checks.
inline constexpr double kNormTolerance = 1e-12;
/// End-to-end state equality.
inline constexpr double kStateTolerance = 1e-9;

namespace slot {
inline constexpr std::string_view elem = "elem";
inline constexpr std::string_view count = "count";
inline constexpr std::string_view flag = "flag";
std::string elem_copy(std::size_t machine);
std::string count_copy(std::size_t machine);
std::string control(std::size_t machine);
}  // namespace slot

struct Slot {
  std::string name;
  std::size_t dim = 1;

  bool operator==(const Slot&) const = default;
};

/// Per-slot coordinates of one basis state.
using BasisIndex = std::vector<std::size_t>;

class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<Slot> slots);

  /// [elem: N, count: nu+1, flag: 2]. The flag is the algorithm's only work
  /// qubit in the sequential construction.
  static RegisterLayout sequential(std::size_t universe, std::size_t capacity);

  /// Sequential slots followed by one (elem_copy, count_copy, control) triple
  /// per machine, grouped bank by bank: all element copies, then all count
  /// copies, then all controls.
  static RegisterLayout parallel(std::size_t universe, std::size_t machines,
                                 std::size_t capacity);

  std::span<const Slot> slots() const { return slots_; }
  std::size_t slot_count() const { return slots_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t slot_dim(std::size_t slot) const { return slots_.at(slot).dim; }
  std::size_t stride(std::size_t slot) const { return strides_.at(slot); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws invalid_layout when the slot is missing.
  std::size_t index_of(std::string_view name) const;
  bool has(std::string_view name) const { return find(name).has_value(); }

  std::size_t flatten(std::span<const std::size_t> coords) const;
  BasisIndex unflatten(std::size_t index) const;
  std::size_t coordinate(std::size_t index, std::size_t slot) const {
    return (index / strides_[slot]) % slots_[slot].dim;
  }

  bool operator==(const RegisterLayout& other) const {
    return slots_ == other.slots_;
  }

 private:
  std::vector<Slot> slots_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

class StateVector {
 public:
  /// The all-zero basis state |0...0>.
  explicit StateVector(RegisterLayout layout);
  /// Takes ownership of raw amplitudes; the length must match the layout.
  StateVector(RegisterLayout layout, std::vector<Amplitude> amplitudes);

  static StateVector basis(RegisterLayout layout,
                           std::span<const std::size_t> coords);

  const RegisterLayout& layout() const { return layout_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<Amplitude> amplitudes() { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }
  Amplitude& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm() const;
  void normalize();

  bool operator==(const StateVector& other) const {
    return layout_ == other.layout_ && amplitudes_ == other.amplitudes_;
  }

 private:
  RegisterLayout layout_;
  std::vector<Amplitude> amplitudes_;
};

/// Maps coordinates of the selected slots (in the order given) to new
/// coordinates. Must be a bijection on their joint coordinate space.
using BasisMap =
    std::function<void(std::span<const std::size_t>, std::span<std::size_t>)>;

/// Returns the rotation angle for a control value, or nullopt where the
/// rotation is not applied.
using AngleFunction =
    std::function<std::optional<double>(std::span<const std::size_t>)>;

/// Returns the phase for a coordinate value, or nullopt for no phase.
using PhaseFunction =
    std::function<std::optional<double>(std::span<const std::size_t>)>;

StateVector prepare_uniform(const RegisterLayout& layout);

void apply_basis_map(StateVector& state, std::span<const std::size_t> slots,
                     const BasisMap& map);

/// On every control value with an angle g, rotates the two-level target by
/// |0> -> cos g |0> + sin g |1>, |1> -> -sin g |0> + cos g |1>. The dagger
/// rotates by -g.
void apply_conditioned_rotation(StateVector& state,
                                std::span<const std::size_t> controls,
                                std::size_t target, const AngleFunction& angle,
                                bool dagger = false);

/// Diagonal phase e^{i p(x)} on the selected slots' coordinates.
void apply_diagonal_phase(StateVector& state,
                          std::span<const std::size_t> slots,
                          const PhaseFunction& phase);

void apply_global_phase(StateVector& state, double phase);

/// Discrete Fourier transform on one slot: |x> -> N^{-1/2} sum_y w^{xy} |y>.
/// Maps |0> to the uniform superposition.
void apply_fourier(StateVector& state, std::size_t slot, bool dagger = false);

Amplitude inner_product(const StateVector& a, const StateVector& b);

/// Euclidean distance ||a - b||.
double distance(const StateVector& a, const StateVector& b);

/// ||a - e^{ia} b|| after rotating b onto a by the phase of a at the
/// largest-magnitude amplitude of b.
double phase_aligned_distance(const StateVector& a, const StateVector& b);

/// Norm of the residual vector attached to each value of the elem slot.
std::vector<double> branch_norms_by_elem(const StateVector& state);

/// Residual vectors phi_i with |state> = sum_i |i>|phi_i>, split on `slot`.
std::vector<std::vector<Amplitude>> branch_vectors(const StateVector& state,
                                                   std::size_t slot);

/// Norm of the component where any of the listed slots is non-zero.
double norm_outside_zero(const StateVector& state,
                         std::span<const std::size_t> slots);

/// Projects onto the listed slots being 0 and drops them from the layout. The
/// result is not renormalized.
StateVector restrict_to_zero(const StateVector& state,
                             std::span<const std::size_t> slots);

}  // namespace qds
