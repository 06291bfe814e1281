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
#include <numeric>
#include <set>

#include "qds/adversary.hpp"
#include "qds/error.hpp"
#include "support.hpp"

using namespace qds;
using Catch::Matchers::WithinAbs;

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

// Every row sigma(T_k) over all permutations of the universe that keep the
// support's relative order, deduplicated.
std::set<std::vector<Count>> brute_force_family(std::span<const Count> row) {
  const std::size_t n = row.size();
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::set<std::vector<Count>> out;
  do {
    std::size_t last = 0;
    bool first = true;
    bool ordered = true;
    for (std::size_t i = 0; i < n && ordered; ++i) {
      if (row[i] == 0) continue;
      if (!first && sigma[i] < last) ordered = false;
      last = sigma[i];
      first = false;
    }
    if (!ordered) continue;
    std::vector<Count> image(n, 0);
    for (std::size_t i = 0; i < n; ++i) image[sigma[i]] = row[i];
    out.insert(image);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace

TEST_CASE("hard-input conditions on instance A", "[adversary]") {
  const auto db = testing::instance_a();
  const auto c = check_hard_input(db, {0, 0.5, 0.5});
  CHECK(c.total == 5);
  CHECK(c.machine_size == 3);
  CHECK(c.support == 2);
  CHECK(c.capacity == 2);
  CHECK(c.capacity_sum == 3);
  CHECK(c.majority);
  CHECK(c.density);
  CHECK(c.headroom);
  CHECK(c.passed());

  const auto strict = check_hard_input(db, {0, 1.0, 0.5});
  CHECK_FALSE(strict.majority);
  CHECK(strict.failures() == std::vector<std::string>{"majority"});

  const DistributedDatabase empty_k(4, 4, {{0, 0, 0, 0}, {1, 1, 0, 0}});
  CHECK_FALSE(check_hard_input(empty_k, {0, 0.1, 0.5}).majority);

  const auto missing = check_hard_input(db, {5, 0.5, 0.5});
  CHECK_FALSE(missing.passed());
  CHECK_FALSE(missing.note.empty());

  // Headroom: 2 + 2 > nu = 3.
  const DistributedDatabase tight(3, 3, {{2, 0, 0}, {0, 2, 0}});
  CHECK_FALSE(check_hard_input(tight, {0, 0.5, 0.5}).headroom);
}

TEST_CASE("binomial coefficients", "[adversary]") {
  const auto table = testing::pascal(60);
  for (std::size_t n = 0; n <= 60; ++n) {
    for (std::size_t r = 0; r <= n; ++r) REQUIRE(binomial(n, r) == table[n][r]);
    CHECK(binomial(n, n + 1) == 0);
  }
  CHECK(binomial(200, 100) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("instance A family", "[adversary]") {
  const auto db = testing::instance_a();
  const auto family = enumerate_family(db, {0, 0.5, 0.5});
  REQUIRE(family.members.size() == 6);
  const std::vector<std::vector<std::size_t>> supports = {{0, 1}, {0, 2}, {0, 3},
                                                          {1, 2}, {1, 3}, {2, 3}};
  for (std::size_t m = 0; m < 6; ++m) {
    std::vector<Count> expect(4, 0);
    expect[supports[m][0]] = 2;
    expect[supports[m][1]] = 1;
    const auto row = family.members[m].row(0);
    CHECK(std::vector<Count>(row.begin(), row.end()) == expect);
    const auto other = family.members[m].row(1);
    CHECK(std::vector<Count>(other.begin(), other.end()) == std::vector<Count>{0, 1, 1, 0});
  }
  CHECK(family.members.front() == db);
}

TEST_CASE("family enumeration matches brute-force permutations", "[adversary]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_univ = 2 + rng() % 6;
    const std::size_t support = 1 + rng() % n_univ;
    std::vector<Count> row(n_univ, 0);
    std::vector<std::size_t> idx(n_univ);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t s = 0; s < support; ++s) row[idx[s]] = 1 + static_cast<Count>(rng() % 3);
    const DistributedDatabase db(n_univ, 3, {row});
    const auto family = enumerate_family(db, {0, 0.5, 0.3});
    std::set<std::vector<Count>> rows;
    for (const auto& m : family.members) {
      const auto r = m.row(0);
      rows.emplace(r.begin(), r.end());
    }
    CHECK(rows.size() == family.members.size());
    CHECK(family.members.size() == binomial(n_univ, support));
    CHECK(rows == brute_force_family(row));
  }
}

TEST_CASE("family edge cases and errors", "[adversary]") {
  const DistributedDatabase full(3, 1, {{1, 1, 1}});
  CHECK(enumerate_family(full, {0, 0.5, 0.5}).members.size() == 1);
  const auto single = testing::single_element(6, 2);
  CHECK(enumerate_family(single, {0, 0.5, 0.5}).members.size() == 6);
  CHECK(code_of([&] { (void)enumerate_family(testing::instance_a(), {0, 0.5, 0.5}, 5); }) ==
        ErrorCode::family_too_large);
  CHECK(code_of([&] { (void)enumerate_family(testing::instance_a(), {1, 0.9, 0.5}); }) ==
        ErrorCode::hard_input);
}

TEST_CASE("paired simulation on instance A", "[adversary]") {
  const auto db = testing::instance_a();
  const auto family = enumerate_family(db, {0, 0.5, 0.5});
  for (const auto model : {QueryModel::sequential, QueryModel::parallel}) {
    const auto trace = build_sampler_trace(db, model);
    const auto sim = simulate_pair(family, trace, 2);
    CHECK(sim.machine_calls == (model == QueryModel::sequential ? 6u : 12u));
    for (const auto& m : sim.members) {
      CHECK(m.distance_sq[0] == 0.0);
      if (model == QueryModel::sequential) CHECK(m.distance_sq[1] > 0.0);
      CHECK_THAT(m.fidelity, WithinAbs(1.0, 1e-9));
      CHECK(m.output_error <= 1e-9);
    }
    const auto p = potential_Dt(sim, family);
    CHECK(p.d[0] == 0.0);
    for (std::size_t t = 0; t < p.d.size(); ++t) {
      CHECK(p.d[t] <= 2.0 * double(t * t) + 1e-9);
      CHECK(p.d[t] >= 0.0);
    }
    CHECK(p.epsilon <= 1e-9);
    const auto report = verify_bounds(p, family);
    CHECK(report.passed());
    CHECK(report.check("family_size").status == CheckStatus::pass);
    CHECK(report.check("upper_bound").status == CheckStatus::pass);
    CHECK(report.check("erased_gap").status == CheckStatus::not_applicable);
  }
}

TEST_CASE("the erased trajectory is identical across members", "[adversary]") {
  const auto db = testing::instance_a();
  const auto family = enumerate_family(db, {0, 0.5, 0.5});
  for (const auto model : {QueryModel::sequential, QueryModel::parallel}) {
    const auto trace = build_sampler_trace(db, model);
    const auto reference = erased_trajectory(family.members.front(), 0, trace);
    for (const auto& m : family.members) CHECK(erased_trajectory(m, 0, trace) == reference);
    const auto sim = simulate_pair(family, trace, 1);
    CHECK(sim.erased_snapshots.size() == sim.machine_calls + 1);
    for (std::size_t t = 1; t < reference.size(); ++t) CHECK(sim.erased_snapshots[t] == reference[t]);
  }
}

TEST_CASE("an empty target machine gives no distinguishing power", "[adversary]") {
  const DistributedDatabase db(4, 2, {{0, 0, 0, 0}, {1, 2, 0, 1}});
  HardInputFamily family{db, {0, 0.5, 0.5}, {db}};
  const auto sim = simulate_pair(family, build_sampler_trace(db, QueryModel::sequential), 1);
  const auto p = potential_Dt(sim, family);
  for (const double d : p.d) CHECK(d == 0.0);
}

TEST_CASE("the lower bound applies on sparse inputs", "[adversary]") {
  const auto db = testing::single_element(32, 5);
  AdversaryOptions options;
  options.threads = 1;
  const auto run = run_adversary(db, {0, 0.5, 1.0}, options);
  CHECK(run.family_size == 32);
  CHECK(run.bounds.fidelity_hypothesis);
  const auto& lower = run.bounds.check("lower_bound");
  CHECK(lower.status == CheckStatus::pass);
  CHECK(run.bounds.check("erased_gap").status == CheckStatus::pass);
  CHECK(run.potential.d.back() >= run.bounds.c * 1.0 - 1e-9);
  CHECK(run.bounds.passed());
}

TEST_CASE("a truncated sampler is flagged below fidelity 9/16", "[adversary]") {
  const auto db = testing::single_element(16, 3);
  AdversaryOptions options;
  options.threads = 1;
  options.sampler.iterations = build_schedule(db).iterations - 1;
  options.sampler.tuned_step = false;
  const auto run = run_adversary(db, {0, 0.5, 1.0}, options);
  CHECK(run.potential.min_fidelity < 9.0 / 16.0);
  CHECK_FALSE(run.bounds.fidelity_hypothesis);
  CHECK(run.bounds.check("lower_bound").status == CheckStatus::not_applicable);
  CHECK(run.bounds.check("upper_bound").status == CheckStatus::pass);
  CHECK(run.bounds.check("triangle").status == CheckStatus::pass);
}

TEST_CASE("thread count does not change results", "[adversary]") {
  const DistributedDatabase db(6, 3, {{2, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}});
  const auto family = enumerate_family(db, {0, 0.5, 0.5});
  const auto trace = build_sampler_trace(db, QueryModel::sequential);
  const auto a = potential_Dt(simulate_pair(family, trace, 1), family);
  const auto b = potential_Dt(simulate_pair(family, trace, 4), family);
  CHECK(a.d == b.d);
  CHECK(a.oracle_difference == b.oracle_difference);
  CHECK(a.fidelities == b.fidelities);
}
