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


#include <catch_amalgamated.hpp>

#include "qds/error.hpp"
#include "qds/oracles.hpp"
#include "support.hpp"

using namespace qds;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a qds::Error");
  return ErrorCode::io;
}

StateVector basis(const RegisterLayout& layout, std::vector<std::size_t> coords) {
  return StateVector::basis(layout, coords);
}

// Amplitude at coordinates, for readability.
Amplitude at(const StateVector& s, std::vector<std::size_t> coords) {
  return s[s.layout().flatten(coords)];
}

}  // namespace

TEST_CASE("sequential oracle adds c_ij modulo nu+1", "[oracles]") {
  const auto db = testing::instance_a();
  const auto layout = RegisterLayout::sequential(4, 4);
  QueryCounter counter(2);
  auto s = basis(layout, {0, 3, 0});
  apply_sequential_oracle(s, db, 0, false, counter);
  CHECK(at(s, {0, 0, 0}) == Amplitude(1.0));
  CHECK(counter.machine_queries(0) == 1);

  // Exhaustive check against the formula on every basis state and machine.
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t idx = 0; idx < layout.dimension(); ++idx) {
      const auto c = layout.unflatten(idx);
      for (const bool dagger : {false, true}) {
        auto t = StateVector::basis(layout, c);
        apply_sequential_oracle(t, db, j, dagger, counter);
        auto d = c;
        const auto cij = static_cast<std::size_t>(db.multiplicity(c[0], j));
        d[1] = dagger ? (c[1] + 5 - cij) % 5 : (c[1] + cij) % 5;
        REQUIRE(at(t, d) == Amplitude(1.0));
      }
    }
  }
}

TEST_CASE("oracle and its dagger cancel and each costs one query", "[oracles]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto db = testing::random_database(rng, 5, 3, 4);
    const auto layout = RegisterLayout::sequential(5, 4);
    const auto s = testing::random_state(layout, rng);
    QueryCounter counter(3);
    for (std::size_t j = 0; j < 3; ++j) {
      auto t = s;
      apply_sequential_oracle(t, db, j, false, counter);
      apply_sequential_oracle(t, db, j, true, counter);
      CHECK(testing::max_abs_diff(s, t) < 1e-15);
    }
    CHECK(counter.sequential_total() == 6);
    CHECK(counter.parallel_total() == 0);
  }
}

TEST_CASE("controlled oracle acts only when the control is set", "[oracles]") {
  const auto db = testing::instance_a();
  const RegisterLayout layout({{"elem", 4}, {"count", 5}, {"b", 2}});
  const OracleWiring wiring{"elem", "count", "b"};
  QueryCounter counter(2);
  auto on = basis(layout, {0, 0, 1});
  apply_controlled_oracle(on, db, 0, false, wiring, counter);
  CHECK(at(on, {0, 2, 1}) == Amplitude(1.0));
  auto off = basis(layout, {0, 0, 0});
  apply_controlled_oracle(off, db, 0, false, wiring, counter);
  CHECK(at(off, {0, 0, 0}) == Amplitude(1.0));
  CHECK(counter.machine_queries(0) == 2);
}

TEST_CASE("parallel oracle updates every bank in one query", "[oracles]") {
  const auto db = testing::instance_a();
  const auto layout = RegisterLayout::parallel(4, 2, 4);
  std::vector<std::size_t> coords(layout.slot_count(), 0);
  coords[layout.index_of(slot::elem_copy(0))] = 0;
  coords[layout.index_of(slot::elem_copy(1))] = 1;
  coords[layout.index_of(slot::control(0))] = 1;
  coords[layout.index_of(slot::control(1))] = 1;
  auto s = StateVector::basis(layout, coords);
  QueryCounter counter(2);
  apply_parallel_oracle(s, db, false, counter);
  auto expect = coords;
  expect[layout.index_of(slot::count_copy(0))] = 2;
  expect[layout.index_of(slot::count_copy(1))] = 1;
  CHECK(s[layout.flatten(expect)] == Amplitude(1.0));
  CHECK(counter.parallel_total() == 1);
  CHECK(counter.sequential_total() == 0);
  CHECK(counter.sequential_equivalent() == 2);
}

TEST_CASE("parallel oracle equals the composition of controlled oracles", "[oracles]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto db = testing::random_database(rng, 3, n, 2);
    const auto layout = RegisterLayout::parallel(3, n, 2);
    for (int k = 0; k < 3; ++k) {
      const auto s = testing::random_state(layout, rng);
      for (const bool dagger : {false, true}) {
        auto a = s;
        auto b = s;
        QueryCounter pc(n);
        QueryCounter sc(n);
        apply_parallel_oracle(a, db, dagger, pc);
        for (std::size_t j = 0; j < n; ++j) {
          apply_controlled_oracle(b, db, j, dagger, OracleWiring::bank(j), sc);
        }
        CHECK(testing::max_abs_diff(a, b) < 1e-12);
        CHECK(pc.parallel_total() == 1);
        CHECK(sc.sequential_total() == n);
      }
    }
  }
}

TEST_CASE("oracle errors", "[oracles]") {
  const auto db = testing::instance_a();
  QueryCounter counter(2);
  StateVector s(RegisterLayout::sequential(4, 4));
  CHECK(code_of([&] { apply_sequential_oracle(s, db, 2, false, counter); }) == ErrorCode::index);
  StateVector wrong_count(RegisterLayout::sequential(4, 3));
  CHECK(code_of([&] { apply_sequential_oracle(wrong_count, db, 0, false, counter); }) ==
        ErrorCode::shape);
  StateVector wrong_elem(RegisterLayout::sequential(5, 4));
  CHECK(code_of([&] { apply_sequential_oracle(wrong_elem, db, 0, false, counter); }) ==
        ErrorCode::shape);
  StateVector par(RegisterLayout::parallel(4, 2, 4));
  QueryCounter three(3);
  CHECK(code_of([&] { apply_parallel_oracle(par, db, false, three); }) == ErrorCode::shape);
  StateVector extra(RegisterLayout::parallel(4, 3, 4));
  CHECK(code_of([&] { apply_parallel_oracle(extra, db, false, counter); }) == ErrorCode::shape);
  CHECK(code_of([&] { counter.record_sequential(5); }) == ErrorCode::index);
}
