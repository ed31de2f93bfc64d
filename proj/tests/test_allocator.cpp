#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "rasim/allocator.hpp"

using namespace rasim;
using rasim::testfix::tiny_region;

namespace {

MsbRequestVector request_of(std::vector<int> n) {
  MsbRequestVector req;
  req.n = std::move(n);
  req.y.assign(req.n.size(), 0.0);
  return req;
}

}  // namespace

TEST_CASE("rack spread: quotient everywhere, remainder to the front") {
  const RegionTopology topo = tiny_region(1, 5, 15, 2);
  const Assignment prev = empty_assignment(topo);

  SUBCASE("seven over five racks") {
    const std::vector<int> row = spread_across_racks(request_of({7}), prev, 0, 0, topo);
    CHECK(row == std::vector<int>{2, 2, 1, 1, 1});
  }
  SUBCASE("exact quotient") {
    const std::vector<int> row = spread_across_racks(request_of({5}), prev, 0, 0, topo);
    CHECK(row == std::vector<int>{1, 1, 1, 1, 1});
  }
  SUBCASE("zero requests nothing") {
    const std::vector<int> row = spread_across_racks(request_of({0}), prev, 0, 0, topo);
    CHECK(row == std::vector<int>{0, 0, 0, 0, 0});
  }
}

TEST_CASE("rack spread favors racks already holding the reservation") {
  const RegionTopology topo = tiny_region(1, 5, 15, 2);
  Assignment prev = empty_assignment(topo);
  // rack 2 holds ids {2, 7, 12}; mark two of them ours
  prev[2] = 0;
  prev[7] = 0;
  const std::vector<int> row = spread_across_racks(request_of({7}), prev, 0, 0, topo);
  CHECK(row == std::vector<int>{2, 1, 2, 1, 1});

  // another reservation's holdings do not bias our spread
  const std::vector<int> other = spread_across_racks(request_of({7}), prev, 1, 0, topo);
  CHECK(other == std::vector<int>{2, 2, 1, 1, 1});
}

TEST_CASE("rack spread conserves counts per msb") {
  Rng rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    const int msbs = 1 + rng.uniform_int(4);
    const int rpm = 1 + rng.uniform_int(4);
    const int servers = msbs * rpm * (1 + rng.uniform_int(3));
    const RegionTopology topo = tiny_region(msbs, rpm, servers, 2);
    Assignment prev = empty_assignment(topo);
    for (int b = 0; b < servers; ++b)
      if (rng.uniform() < 0.4) prev[b] = rng.uniform_int(2);
    std::vector<int> n(msbs);
    for (int& v : n) v = rng.uniform_int(2 * rpm + 2);
    const std::vector<int> row = spread_across_racks(request_of(n), prev, 0, 0, topo);
    for (int f = 0; f < msbs; ++f) {
      int sum = 0;
      for (int j = 0; j < rpm; ++j) sum += row[f * rpm + j];
      CHECK(sum == n[f]);
    }
  }
}

TEST_CASE("overflow moves to same-msb vacancies first") {
  const RegionTopology topo = tiny_region(1, 2, 4, 2);  // racks hold 2 each
  Grid<int> m(2, 2, 0);
  m(0, 0) = 2;
  m(1, 0) = 2;
  const RackRequestMatrix out = resolve_overflow(std::move(m), topo, 0);
  CHECK(out.m(0, 0) == 2);
  CHECK(out.m(1, 0) == 0);  // trimmed from the higher index
  CHECK(out.m(1, 1) == 2);  // re-placed next door
  CHECK(out.shortfall == std::vector<int>{0, 0});
}

TEST_CASE("overflow prefers the roomiest rack, ties by id") {
  // 2 msbs x 2 racks, 8 servers: every rack holds 2
  const RegionTopology topo = tiny_region(2, 2, 8, 1);
  Grid<int> m(1, 4, 0);
  m(0, 0) = 3;  // one too many
  m(0, 1) = 1;  // same msb, vacancy 1
  // racks 2,3 empty (vacancy 2) but in the other msb
  const RackRequestMatrix out = resolve_overflow(std::move(m), topo, 0);
  CHECK(out.m(0, 0) == 2);
  CHECK(out.m(0, 1) == 2);  // same-msb vacancy wins over the roomier far rack
  CHECK(out.m(0, 2) == 0);
  CHECK(out.shortfall[0] == 0);
}

TEST_CASE("unplaceable overflow lands on the highest reservation index") {
  const RegionTopology topo = tiny_region(1, 2, 4, 2);
  Grid<int> m(2, 2, 0);
  m(0, 0) = 2;
  m(0, 1) = 2;
  m(1, 0) = 3;  // requests exceed total capacity by 3
  const RackRequestMatrix out = resolve_overflow(std::move(m), topo, 0);
  CHECK(out.shortfall == std::vector<int>{0, 3});
  CHECK(out.m(0, 0) == 2);
  CHECK(out.m(0, 1) == 2);
  CHECK(out.m(1, 0) == 0);
  CHECK(out.m(1, 1) == 0);
}

TEST_CASE("overflow resolution invariants on random instances") {
  Rng rng(808);
  for (int trial = 0; trial < 300; ++trial) {
    const int msbs = 1 + rng.uniform_int(3);
    const int rpm = 1 + rng.uniform_int(3);
    const int racks = msbs * rpm;
    const int servers = racks * (1 + rng.uniform_int(3));
    const int logical = 1 + rng.uniform_int(3);
    const RegionTopology topo = tiny_region(msbs, rpm, servers, logical);
    Grid<int> m(logical, racks, 0);
    std::vector<long long> requested(logical, 0);
    for (int l = 0; l < logical; ++l)
      for (int k = 0; k < racks; ++k) {
        m(l, k) = rng.uniform_int(4);
        requested[l] += m(l, k);
      }
    const RackRequestMatrix out = resolve_overflow(std::move(m), topo, 0);
    for (int k = 0; k < racks; ++k) {
      int load = 0;
      for (int l = 0; l < logical; ++l) {
        CHECK(out.m(l, k) >= 0);
        load += out.m(l, k);
      }
      CHECK(load <= topo.count_in_rack(0, k));  // capped by capacity
    }
    for (int l = 0; l < logical; ++l) {
      long long placed = 0;
      for (int k = 0; k < racks; ++k) placed += out.m(l, k);
      CHECK(placed + out.shortfall[l] == requested[l]);  // conservation
      CHECK(out.shortfall[l] >= 0);
    }
  }
}

TEST_CASE("materialize keeps held servers and fills ascending") {
  const RegionTopology topo = tiny_region(1, 1, 4, 2);

  SUBCASE("matching quota moves nothing") {
    Assignment prev = empty_assignment(topo);
    prev[1] = 0;
    prev[3] = 0;
    Grid<int> m(2, 1, 0);
    m(0, 0) = 2;
    CHECK(materialize(m, prev, 0, topo) == prev);
  }
  SUBCASE("excess holders released lowest id first") {
    Assignment prev = empty_assignment(topo);
    prev[0] = 0;
    prev[1] = 0;
    prev[2] = 0;
    Grid<int> m(2, 1, 0);
    m(0, 0) = 2;
    const Assignment out = materialize(m, prev, 0, topo);
    CHECK(out[0] == kUnassigned);
    CHECK(out[1] == 0);
    CHECK(out[2] == 0);
    CHECK(out[3] == kUnassigned);
  }
  SUBCASE("fresh fills take ascending ids") {
    const Assignment prev = empty_assignment(topo);
    Grid<int> m(2, 1, 0);
    m(0, 0) = 1;
    m(1, 0) = 2;
    const Assignment out = materialize(m, prev, 0, topo);
    CHECK(out == Assignment{0, 1, 1, kUnassigned});
  }
  SUBCASE("sticky and fill combine") {
    Assignment prev = empty_assignment(topo);
    prev[3] = 1;
    Grid<int> m(2, 1, 0);
    m(0, 0) = 1;
    m(1, 0) = 2;
    const Assignment out = materialize(m, prev, 0, topo);
    CHECK(out == Assignment{0, 1, kUnassigned, 1});
  }
  SUBCASE("requests above rack capacity refuse") {
    const Assignment prev = empty_assignment(topo);
    Grid<int> m(2, 1, 0);
    m(0, 0) = 5;
    CHECK_THROWS_AS(materialize(m, prev, 0, topo), std::logic_error);
  }
}

TEST_CASE("materialize leaves other types untouched") {
  RegionParams p;
  p.datacenters = 1;
  p.msbs = 2;
  p.racks = 2;
  p.logical = 2;
  const RegionTopology topo = build_region(p, {ServerTypeSpec{4, 0, 0}, ServerTypeSpec{2, 0, 0}});
  Assignment prev = empty_assignment(topo);
  prev[4] = 1;  // type-1 server
  Grid<int> m(2, 2, 0);
  m(0, 0) = 1;
  const Assignment out = materialize(m, prev, 0, topo);
  CHECK(out[4] == 1);
  int assigned_type0 = 0;
  for (int b = 0; b < 4; ++b) assigned_type0 += out[b] == 0 ? 1 : 0;
  CHECK(assigned_type0 == 1);
}

TEST_CASE("full allocator pipeline holds g1 and conservation on random instances") {
  Rng rng(909);
  for (int trial = 0; trial < 300; ++trial) {
    const int msbs = 1 + rng.uniform_int(3);
    const int rpm = 1 + rng.uniform_int(3);
    const int servers = msbs * rpm * (1 + rng.uniform_int(4));
    const int logical = 1 + rng.uniform_int(3);
    const RegionTopology topo = tiny_region(msbs, rpm, servers, logical);

    Assignment prev = empty_assignment(topo);
    for (int b = 0; b < servers; ++b)
      if (rng.uniform() < 0.5) prev[b] = rng.uniform_int(logical);

    Grid<int> m(logical, topo.params().racks, 0);
    for (int l = 0; l < logical; ++l) {
      std::vector<int> n(msbs);
      for (int& v : n) v = rng.uniform_int(rpm * 2 + 1);
      const std::vector<int> row = spread_across_racks(request_of(n), prev, l, 0, topo);
      for (int k = 0; k < topo.params().racks; ++k) m(l, k) = row[k];
    }
    const RackRequestMatrix resolved = resolve_overflow(std::move(m), topo, 0);
    const Assignment out = materialize(resolved.m, prev, 0, topo);

    // per-rack counts realize the resolved matrix exactly
    for (int k = 0; k < topo.params().racks; ++k)
      for (int l = 0; l < logical; ++l) {
        int count = 0;
        for (int32_t b : topo.servers_in_rack(0, k)) count += out[b] == l ? 1 : 0;
        CHECK(count == resolved.m(l, k));
      }

    // stickiness: held servers keep their reservation up to quota
    for (int k = 0; k < topo.params().racks; ++k)
      for (int l = 0; l < logical; ++l) {
        int held = 0, kept = 0;
        for (int32_t b : topo.servers_in_rack(0, k)) {
          held += prev[b] == l ? 1 : 0;
          kept += prev[b] == l && out[b] == l ? 1 : 0;
        }
        CHECK(kept == std::min(held, resolved.m(l, k)));
      }

    // g1 recount through the independent pair counter
    std::vector<std::pair<int32_t, int32_t>> pairs;
    for (int b = 0; b < servers; ++b)
      if (out[b] != kUnassigned) pairs.emplace_back(b, out[b]);
    CHECK(assignment_conflicts(pairs) == 0);
  }
}
