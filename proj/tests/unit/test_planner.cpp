#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <map>
#include <set>

#include "mapex/grid_io.hpp"
#include "mapex/planner.hpp"
#include "oracles.hpp"

using namespace mapex;

namespace {

std::optional<Coord> argmax_utility(const OccupancyGrid& map, Coord pose, const SensorRig* rig) {
  const auto dist = oracle::bellman_ford(map, pose);
  std::optional<Coord> best;
  long double best_u = -1.0L;
  for (Coord c : oracle::frontier_scan(map)) {
    const auto& d = dist[map.index(c)];
    if (c == pose || !d) continue;
    long double reward = 1.0L;
    if (rig) {
      reward = 0.0L;
      for (const Reading& r : trace_beams(map, c, *rig)) reward += r.category == Cell::Unknown ? 1 : 0;
    }
    const long double u = reward / (1.0L + d->straight + d->diagonal * std::sqrt(2.0L));
    if (!best || u > best_u + 1e-12L) {  // set iteration is row-major, so ties keep the first
      best = c;
      best_u = u;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("path length comparisons are exact") {
  CHECK(PathLength{0, 2} < PathLength{3, 0});
  CHECK(PathLength{3, 0} < PathLength{0, 3});
  CHECK(PathLength{7, 0} > PathLength{0, 4});
  CHECK(PathLength{1, 1} == PathLength{1, 1});
  CHECK(PathLength{0, 2}.value() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sign_of_sqrt2_form(-141421356, 100000000) == 1);
  CHECK(sign_of_sqrt2_form(-141421357, 100000000) == -1);
}

TEST_CASE("utility comparisons follow reward over one plus distance") {
  // reward 10 at distance 4 is worth 2.0, reward 3 at distance 0 is worth 3.0.
  CHECK(compare_utility(10, {4, 0}, 3, {0, 0}) == std::strong_ordering::less);
  CHECK(compare_utility(2, {1, 0}, 4, {3, 0}) == std::strong_ordering::equal);
  CHECK(compare_utility(2, {0, 1}, 4, {1, 2}) == std::strong_ordering::equal);
  CHECK(compare_utility(5, {0, 3}, 5, {4, 0}) == std::strong_ordering::less);
  CHECK(compare_utility(5, {0, 2}, 5, {3, 0}) == std::strong_ordering::greater);
  CHECK(compare_utility(0, {0, 0}, 1, {100, 100}) == std::strong_ordering::less);
}

TEST_CASE("shortest paths in an open 3x3 room") {
  const OccupancyGrid g(3, 3, Cell::Free);
  const ShortestPaths sp = shortest_paths(g, {0, 0});
  CHECK(sp.distance[{0, 0}] == PathLength{});
  CHECK(sp.distance[{2, 2}] == PathLength{0, 2});
  CHECK(sp.distance_value({2, 2}) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sp.path_to({2, 2}) == std::vector<Coord>{{1, 1}, {2, 2}});
  CHECK(sp.path_to({0, 0}).empty());
}

TEST_CASE("diagonal moves may not squeeze between two walls") {
  const OccupancyGrid squeeze = load_grid(".#\n#.\n");
  CHECK_FALSE(is_vacancy_edge(squeeze, {0, 0}, {1, 1}));
  CHECK_FALSE(shortest_paths(squeeze, {0, 0}).reachable({1, 1}));
  const OccupancyGrid half = load_grid(".#\n?.\n");
  CHECK(is_vacancy_edge(half, {0, 0}, {1, 1}));
  CHECK_FALSE(is_vacancy_edge(half, {0, 0}, {1, 0}));
  CHECK_FALSE(is_vacancy_edge(half, {0, 0}, {0, 0}));
}

TEST_CASE("Dijkstra equals Bellman-Ford on random 8x8 maps") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const OccupancyGrid g = oracle::random_map(rng, 8, 8, 0.3, 0.15);
    const auto source = oracle::first_free(g);
    if (!source) continue;
    const ShortestPaths sp = shortest_paths(g, *source);
    const auto expected = oracle::bellman_ford(g, *source);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Coord c = g.coord(i);
      REQUIRE(sp.reachable(c) == expected[i].has_value());
      if (!expected[i]) {
        CHECK(std::isinf(sp.distance_value(c)));
        continue;
      }
      CHECK(sp.distance[c] == *expected[i]);
      PathLength walked;
      Coord at = *source;
      for (Coord next : sp.path_to(c)) {
        REQUIRE(is_vacancy_edge(g, at, next));
        walked += PathLength::step(next.row != at.row && next.col != at.col);
        at = next;
      }
      CHECK(walked == *expected[i]);
    }
  }
}

TEST_CASE("shortest paths need a free source") {
  const OccupancyGrid g = load_grid("#.?\n");
  CHECK_THROWS_AS(shortest_paths(g, {0, 0}), PreconditionError);
  CHECK_THROWS_AS(shortest_paths(g, {0, 2}), PreconditionError);
  CHECK_THROWS_AS(shortest_paths(g, {3, 0}), PreconditionError);
  CHECK_THROWS_AS(shortest_paths(g, {0, 1}).path_to({0, 0}), PreconditionError);
}

TEST_CASE("frontier basics") {
  std::mt19937_64 rng(1);
  CHECK(detect_frontier(oracle::random_map(rng, 6, 6, 0.3, 0.0)).empty());
  OccupancyGrid g(5, 5, Cell::Unknown);
  g[{2, 3}] = Cell::Free;
  CHECK(detect_frontier(g) == Frontier{{2, 3}});
  // Diagonal unknown neighbours do not count.
  const OccupancyGrid diag = load_grid("?#\n#.\n");
  CHECK(detect_frontier(diag).empty());
}

TEST_CASE("frontier detection equals the per-cell scan") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const OccupancyGrid g = oracle::random_map(rng, 3 + trial % 9, 4 + trial % 7, 0.25, 0.35);
    const auto expected = oracle::frontier_scan(g);
    CHECK(detect_frontier(g) == Frontier(expected.begin(), expected.end()));
  }
}

TEST_CASE("planner names parse") {
  for (PlannerKind k : {PlannerKind::Random, PlannerKind::NearestFrontier, PlannerKind::CostUtility}) {
    CHECK(parse_planner_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_planner_kind("greedy"), ConfigError);
}

TEST_CASE("random exploration with one frontier cell has no choice") {
  const OccupancyGrid g = load_grid("#####\n#...?\n#####\n");
  PlannerState state({1, 1}, g, 42);
  for (int i = 0; i < 20; ++i) {
    const auto d = plan_random(state);
    REQUIRE(d);
    CHECK(d->waypoint == Coord{1, 3});
    CHECK(d->path == std::vector<Coord>{{1, 2}, {1, 3}});
  }
}

TEST_CASE("random exploration is seeded and uniform") {
  const OccupancyGrid g = load_grid("##????#\n#.....#\n#######\n");
  auto sequence = [&](std::uint64_t seed) {
    PlannerState state({1, 1}, g, seed);
    std::vector<Coord> out;
    for (int i = 0; i < 50; ++i) out.push_back(plan_random(state)->waypoint);
    return out;
  };
  CHECK(sequence(7) == sequence(7));
  CHECK(sequence(7) != sequence(8));

  PlannerState state({1, 1}, g, 2024);
  std::map<Coord, int> counts;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) ++counts[plan_random(state)->waypoint];
  REQUIRE(counts.size() == 4);
  double chi2 = 0.0;
  for (const auto& [cell, n] : counts) {
    CHECK(n / static_cast<double>(kDraws) == doctest::Approx(0.25).epsilon(0.08));
    chi2 += (n - kDraws / 4.0) * (n - kDraws / 4.0) / (kDraws / 4.0);
  }
  CHECK(chi2 < 11.34);  // 3 degrees of freedom, p = 0.01
}

TEST_CASE("nearest frontier prefers the shorter distance and breaks ties row-major") {
  // Frontier cells at distance 3 (west) and 5 (east).
  const OccupancyGrid g = load_grid("###########\n?.........?\n###########\n");
  PlannerState state({1, 4}, g, 0);
  auto d = plan_nearest_frontier(state);
  REQUIRE(d);
  CHECK(d->waypoint == Coord{1, 1});
  CHECK(d->path.front() == Coord{1, 3});

  const OccupancyGrid tie = load_grid("#?#\n#.#\n#.#\n#.#\n#?#\n");
  PlannerState middle({2, 1}, tie, 0);
  CHECK(plan_nearest_frontier(middle)->waypoint == Coord{1, 1});
}

TEST_CASE("cost-utility goes for the only rewarding cell") {
  // With an east-only sensor the near frontier cell sees nothing unknown.
  const OccupancyGrid g = load_grid("#?#######\n#.......?\n#########\n");
  const SensorRig rig{1, 3.0, 0.0};
  CHECK(exposure_reward(g, {1, 1}, rig) == 0);
  CHECK(exposure_reward(g, {1, 7}, rig) == 1);
  PlannerState state({1, 2}, g, 0);
  const auto d = plan_cost_utility(state, rig);
  REQUIRE(d);
  CHECK(d->waypoint == Coord{1, 7});
  CHECK(d->path.front() == Coord{1, 3});
}

TEST_CASE("greedy planners match exhaustive evaluation on random maps") {
  std::mt19937_64 rng(31);
  const SensorRig rig{8, 4.0, 0.0};
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const OccupancyGrid g = oracle::random_map(rng, 7 + trial % 3, 8, 0.2, 0.4);
    const auto pose = oracle::first_free(g);
    if (!pose) continue;
    const PlannerState state(*pose, g, 0);
    const auto nearest = plan_nearest_frontier(state);
    const auto nearest_oracle = argmax_utility(g, *pose, nullptr);
    REQUIRE(nearest.has_value() == nearest_oracle.has_value());
    if (!nearest) continue;
    ++compared;
    CHECK(nearest->waypoint == *nearest_oracle);
    CHECK(plan_cost_utility(state, rig)->waypoint == argmax_utility(g, *pose, &rig).value());
  }
  CHECK(compared > 100);
}

TEST_CASE("empty reachable frontier yields no decision") {
  const OccupancyGrid g = load_grid("#####\n#...#\n#####\n");
  PlannerState state({1, 1}, g, 0);
  CHECK_FALSE(plan_random(state));
  CHECK_FALSE(plan_nearest_frontier(state));
  CHECK_FALSE(plan_cost_utility(state, SensorRig{}));
}

TEST_CASE("fail-safe fires only when observations still offer a way out") {
  // Observations: an open corridor with unknown space at its end.
  const ObservationMap obs = load_grid("#######\n#....??\n#######\n");
  // Prediction seals the corridor.
  const OccupancyGrid sealed = load_grid("#######\n#..####\n#######\n");
  const PlannerState blocked({1, 1}, sealed, 0);
  const auto directive = failsafe_check(blocked, obs);
  REQUIRE(directive);
  CHECK(directive->fallback_map == obs);

  const PlannerState agree({1, 1}, obs, 0);
  CHECK_FALSE(failsafe_check(agree, obs));

  const ObservationMap enclosed = load_grid("#####\n#...#\n#####\n");
  const PlannerState boxed({1, 1}, enclosed, 0);
  CHECK_FALSE(failsafe_check(boxed, enclosed));
}

TEST_CASE("explorer steps along vacancy edges and random commits to its path") {
  const OccupancyGrid g = load_grid("#########\n#.......?\n#########\n");
  const SensorRig rig{};
  Explorer random(PlannerKind::Random, rig, 3);
  StepChoice first = random.next_step({1, 1}, g, g);
  CHECK(first.replanned);
  REQUIRE(first.next);
  CHECK(*first.next == Coord{1, 2});
  StepChoice second = random.next_step({1, 2}, g, g);
  CHECK_FALSE(second.replanned);
  CHECK(*second.next == Coord{1, 3});
  CHECK(*second.waypoint == Coord{1, 7});

  Explorer nearest(PlannerKind::NearestFrontier, rig, 3);
  CHECK(nearest.next_step({1, 1}, g, g).replanned);
  CHECK(nearest.next_step({1, 2}, g, g).replanned);
}

TEST_CASE("explorer reports why it stalled") {
  const SensorRig rig{};
  const OccupancyGrid done = load_grid("#####\n#...#\n#####\n");
  Explorer e(PlannerKind::NearestFrontier, rig, 0);
  const StepChoice c = e.next_step({1, 1}, done, done);
  CHECK_FALSE(c.next);
  CHECK(c.stall == StallCause::FrontierExhausted);

  const ObservationMap obs = load_grid("#######\n#....??\n#######\n");
  const OccupancyGrid sealed = load_grid("#######\n#..####\n#######\n");
  Explorer no_failsafe(PlannerKind::NearestFrontier, rig, 0, false);
  CHECK(no_failsafe.next_step({1, 1}, sealed, obs).stall == StallCause::Sealed);
  Explorer with_failsafe(PlannerKind::NearestFrontier, rig, 0, true);
  const StepChoice recovered = with_failsafe.next_step({1, 1}, sealed, obs);
  CHECK(recovered.failsafe_used);
  CHECK(*recovered.next == Coord{1, 2});
}
