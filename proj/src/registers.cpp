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

#include "qds/registers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "detail/slot_partition.hpp"
#include "qds/error.hpp"

namespace qds {

namespace {

// Dense storage beyond this many amplitudes is not a desk-scale instance.
constexpr std::size_t kMaxDimension = std::size_t{1} << 30;

void require_same_layout(const StateVector& a, const StateVector& b) {
  if (!(a.layout() == b.layout())) {
    fail(ErrorCode::shape, "state vectors have different layouts");
  }
}

}  // namespace

namespace slot {
std::string elem_copy(std::size_t machine) {
  return "elem_copy" + std::to_string(machine);
}
std::string count_copy(std::size_t machine) {
  return "count_copy" + std::to_string(machine);
}
std::string control(std::size_t machine) {
  return "ctrl" + std::to_string(machine);
}
}  // namespace slot

RegisterLayout::RegisterLayout(std::vector<Slot> slots)
    : slots_(std::move(slots)), strides_(slots_.size(), 1) {
  std::unordered_set<std::string_view> names;
  for (const auto& s : slots_) {
    if (s.dim == 0) fail(ErrorCode::invalid_layout, "slot '" + s.name + "' has dimension 0");
    if (s.name.empty()) fail(ErrorCode::invalid_layout, "unnamed slot");
    if (!names.insert(s.name).second) {
      fail(ErrorCode::invalid_layout, "duplicate slot '" + s.name + "'");
    }
  }
  for (std::size_t k = slots_.size(); k-- > 0;) {
    strides_[k] = dimension_;
    if (dimension_ > kMaxDimension / slots_[k].dim) {
      fail(ErrorCode::invalid_layout, "total dimension exceeds 2^30");
    }
    dimension_ *= slots_[k].dim;
  }
}

RegisterLayout RegisterLayout::sequential(std::size_t universe,
                                          std::size_t capacity) {
  return RegisterLayout({{std::string(slot::elem), universe},
                         {std::string(slot::count), capacity + 1},
                         {std::string(slot::flag), 2}});
}

RegisterLayout RegisterLayout::parallel(std::size_t universe,
                                        std::size_t machines,
                                        std::size_t capacity) {
  std::vector<Slot> slots = {{std::string(slot::elem), universe},
                             {std::string(slot::count), capacity + 1},
                             {std::string(slot::flag), 2}};
  for (std::size_t j = 0; j < machines; ++j) slots.push_back({slot::elem_copy(j), universe});
  for (std::size_t j = 0; j < machines; ++j) slots.push_back({slot::count_copy(j), capacity + 1});
  for (std::size_t j = 0; j < machines; ++j) slots.push_back({slot::control(j), 2});
  return RegisterLayout(std::move(slots));
}

std::optional<std::size_t> RegisterLayout::find(std::string_view name) const {
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (slots_[k].name == name) return k;
  }
  return std::nullopt;
}

std::size_t RegisterLayout::index_of(std::string_view name) const {
  auto k = find(name);
  if (!k) fail(ErrorCode::invalid_layout, "layout has no slot '" + std::string(name) + "'");
  return *k;
}

std::size_t RegisterLayout::flatten(std::span<const std::size_t> coords) const {
  if (coords.size() != slots_.size()) {
    fail(ErrorCode::shape, "coordinate count does not match slot count");
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (coords[k] >= slots_[k].dim) {
      fail(ErrorCode::index, "coordinate out of range for slot '" + slots_[k].name + "'");
    }
    index += coords[k] * strides_[k];
  }
  return index;
}

BasisIndex RegisterLayout::unflatten(std::size_t index) const {
  if (index >= dimension_) fail(ErrorCode::index, "basis index out of range");
  BasisIndex coords(slots_.size());
  for (std::size_t k = 0; k < slots_.size(); ++k) coords[k] = coordinate(index, k);
  return coords;
}

StateVector::StateVector(RegisterLayout layout)
    : layout_(std::move(layout)), amplitudes_(layout_.dimension()) {
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(RegisterLayout layout, std::vector<Amplitude> amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.dimension()) {
    fail(ErrorCode::shape, "amplitude count does not match layout dimension");
  }
}

StateVector StateVector::basis(RegisterLayout layout,
                               std::span<const std::size_t> coords) {
  std::vector<Amplitude> amps(layout.dimension());
  amps[layout.flatten(coords)] = 1.0;
  return StateVector(std::move(layout), std::move(amps));
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) fail(ErrorCode::shape, "cannot normalize the zero vector");
  for (auto& a : amplitudes_) a /= n;
}

namespace detail {

SlotPartition partition(const RegisterLayout& layout,
                        std::span<const std::size_t> selected) {
  SlotPartition p;
  std::vector<bool> chosen(layout.slot_count(), false);
  for (std::size_t s : selected) {
    if (s >= layout.slot_count()) fail(ErrorCode::index, "slot index out of range");
    if (chosen[s]) fail(ErrorCode::shape, "slot selected twice");
    chosen[s] = true;
  }
  p.joint_offsets = {0};
  for (std::size_t s : selected) {
    const std::size_t dim = layout.slot_dim(s);
    const std::size_t stride = layout.stride(s);
    p.joint_dims.push_back(dim);
    std::vector<std::size_t> next;
    next.reserve(p.joint_offsets.size() * dim);
    for (std::size_t o : p.joint_offsets) {
      for (std::size_t c = 0; c < dim; ++c) next.push_back(o + c * stride);
    }
    p.joint_offsets = std::move(next);
  }
  p.rest_offsets = {0};
  for (std::size_t s = 0; s < layout.slot_count(); ++s) {
    if (chosen[s]) continue;
    const std::size_t dim = layout.slot_dim(s);
    const std::size_t stride = layout.stride(s);
    std::vector<std::size_t> next;
    next.reserve(p.rest_offsets.size() * dim);
    for (std::size_t o : p.rest_offsets) {
      for (std::size_t c = 0; c < dim; ++c) next.push_back(o + c * stride);
    }
    p.rest_offsets = std::move(next);
  }
  return p;
}

}  // namespace detail

StateVector prepare_uniform(const RegisterLayout& layout) {
  const std::size_t elem = layout.index_of(slot::elem);
  const std::size_t universe = layout.slot_dim(elem);
  std::vector<Amplitude> amps(layout.dimension());
  const double a = 1.0 / std::sqrt(static_cast<double>(universe));
  for (std::size_t i = 0; i < universe; ++i) amps[i * layout.stride(elem)] = a;
  return StateVector(layout, std::move(amps));
}

void apply_basis_map(StateVector& state, std::span<const std::size_t> slots,
                     const BasisMap& map) {
  const auto p = detail::partition(state.layout(), slots);
  const std::size_t joint = p.joint_size();
  std::vector<std::size_t> image(joint);
  std::vector<bool> hit(joint, false);
  std::vector<std::size_t> in(slots.size()), out(slots.size());
  for (std::size_t j = 0; j < joint; ++j) {
    p.decode(j, in);
    std::fill(out.begin(), out.end(), 0);
    map(in, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k] >= p.joint_dims[k]) {
        fail(ErrorCode::invalid_unitary, "basis map leaves the slot range");
      }
    }
    const std::size_t target = p.encode(out);
    if (hit[target]) fail(ErrorCode::invalid_unitary, "basis map is not a bijection");
    hit[target] = true;
    image[j] = target;
  }

  auto amps = state.amplitudes();
  std::vector<Amplitude> result(amps.size());
  for (std::size_t r : p.rest_offsets) {
    for (std::size_t j = 0; j < joint; ++j) {
      result[r + p.joint_offsets[image[j]]] = amps[r + p.joint_offsets[j]];
    }
  }
  std::copy(result.begin(), result.end(), amps.begin());
}

void apply_conditioned_rotation(StateVector& state,
                                std::span<const std::size_t> controls,
                                std::size_t target, const AngleFunction& angle,
                                bool dagger) {
  const auto& layout = state.layout();
  if (target >= layout.slot_count()) fail(ErrorCode::index, "target slot out of range");
  if (layout.slot_dim(target) != 2) {
    fail(ErrorCode::invalid_target, "rotation target must have dimension 2");
  }
  std::vector<std::size_t> selected(controls.begin(), controls.end());
  selected.push_back(target);
  const auto p = detail::partition(layout, selected);

  const std::size_t control_size = p.joint_size() / 2;
  std::vector<std::size_t> coords(selected.size());
  auto amps = state.amplitudes();
  for (std::size_t c = 0; c < control_size; ++c) {
    p.decode(2 * c, coords);
    const auto g = angle(std::span<const std::size_t>(coords).first(controls.size()));
    if (!g || *g == 0.0) continue;
    const double cs = std::cos(*g);
    const double sn = dagger ? -std::sin(*g) : std::sin(*g);
    const std::size_t off0 = p.joint_offsets[2 * c];
    const std::size_t off1 = p.joint_offsets[2 * c + 1];
    for (std::size_t r : p.rest_offsets) {
      const Amplitude a0 = amps[r + off0];
      const Amplitude a1 = amps[r + off1];
      amps[r + off0] = cs * a0 - sn * a1;
      amps[r + off1] = sn * a0 + cs * a1;
    }
  }
}

void apply_diagonal_phase(StateVector& state, std::span<const std::size_t> slots,
                          const PhaseFunction& phase) {
  const auto p = detail::partition(state.layout(), slots);
  std::vector<std::size_t> coords(slots.size());
  auto amps = state.amplitudes();
  for (std::size_t j = 0; j < p.joint_size(); ++j) {
    p.decode(j, coords);
    const auto ph = phase(coords);
    if (!ph) continue;
    const Amplitude factor = std::polar(1.0, *ph);
    const std::size_t off = p.joint_offsets[j];
    for (std::size_t r : p.rest_offsets) amps[r + off] *= factor;
  }
}

void apply_global_phase(StateVector& state, double phase) {
  const Amplitude factor = std::polar(1.0, phase);
  for (auto& a : state.amplitudes()) a *= factor;
}

void apply_fourier(StateVector& state, std::size_t slot, bool dagger) {
  const std::size_t selected[] = {slot};
  const auto p = detail::partition(state.layout(), selected);
  const std::size_t n = p.joint_size();
  if (n == 1) return;
  const double sign = dagger ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Amplitude> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    twiddle[k] = std::polar(scale, sign * 2.0 * std::numbers::pi *
                                       static_cast<double>(k) / static_cast<double>(n));
  }
  auto amps = state.amplitudes();
  std::vector<Amplitude> in(n);
  for (std::size_t r : p.rest_offsets) {
    for (std::size_t x = 0; x < n; ++x) in[x] = amps[r + p.joint_offsets[x]];
    for (std::size_t y = 0; y < n; ++y) {
      Amplitude acc = 0.0;
      for (std::size_t x = 0; x < n; ++x) acc += twiddle[(x * y) % n] * in[x];
      amps[r + p.joint_offsets[y]] = acc;
    }
  }
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  require_same_layout(a, b);
  Amplitude sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

double distance(const StateVector& a, const StateVector& b) {
  require_same_layout(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::norm(a[i] - b[i]);
  return std::sqrt(sum);
}

double phase_aligned_distance(const StateVector& a, const StateVector& b) {
  require_same_layout(a, b);
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < b.dimension(); ++i) {
    if (std::abs(b[i]) > std::abs(b[pivot])) pivot = i;
  }
  Amplitude rotation = 1.0;
  if (std::abs(a[pivot]) > 0.0 && std::abs(b[pivot]) > 0.0) {
    rotation = (a[pivot] / std::abs(a[pivot])) / (b[pivot] / std::abs(b[pivot]));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::norm(a[i] - rotation * b[i]);
  return std::sqrt(sum);
}

std::vector<std::vector<Amplitude>> branch_vectors(const StateVector& state,
                                                   std::size_t slot) {
  const std::size_t selected[] = {slot};
  const auto p = detail::partition(state.layout(), selected);
  std::vector<std::vector<Amplitude>> branches(p.joint_size());
  for (std::size_t i = 0; i < p.joint_size(); ++i) {
    auto& phi = branches[i];
    phi.reserve(p.rest_offsets.size());
    for (std::size_t r : p.rest_offsets) phi.push_back(state[r + p.joint_offsets[i]]);
  }
  return branches;
}

std::vector<double> branch_norms_by_elem(const StateVector& state) {
  const std::size_t elem = state.layout().index_of(slot::elem);
  const std::size_t selected[] = {elem};
  const auto p = detail::partition(state.layout(), selected);
  std::vector<double> norms(p.joint_size(), 0.0);
  for (std::size_t i = 0; i < p.joint_size(); ++i) {
    double sum = 0.0;
    for (std::size_t r : p.rest_offsets) sum += std::norm(state[r + p.joint_offsets[i]]);
    norms[i] = std::sqrt(sum);
  }
  return norms;
}

double norm_outside_zero(const StateVector& state,
                         std::span<const std::size_t> slots) {
  const auto p = detail::partition(state.layout(), slots);
  double sum = 0.0;
  for (std::size_t j = 1; j < p.joint_size(); ++j) {
    for (std::size_t r : p.rest_offsets) sum += std::norm(state[r + p.joint_offsets[j]]);
  }
  return std::sqrt(sum);
}

StateVector restrict_to_zero(const StateVector& state,
                             std::span<const std::size_t> slots) {
  const auto p = detail::partition(state.layout(), slots);
  std::vector<bool> dropped(state.layout().slot_count(), false);
  for (std::size_t s : slots) dropped[s] = true;
  std::vector<Slot> kept;
  for (std::size_t s = 0; s < state.layout().slot_count(); ++s) {
    if (!dropped[s]) kept.push_back(state.layout().slots()[s]);
  }
  std::vector<Amplitude> amps;
  amps.reserve(p.rest_offsets.size());
  for (std::size_t r : p.rest_offsets) amps.push_back(state[r]);
  return StateVector(RegisterLayout(std::move(kept)), std::move(amps));
}

}  // namespace qds
