#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "fhyper/data.hpp"
#include "fhyper/error.hpp"
#include "fhyper/quadrature.hpp"
#include "support.hpp"

using namespace fhyper;
using fhyper::testing::Gen;

namespace {
std::set<std::tuple<double, double>> as_set(const std::vector<TorusPoint> &pts) {
  std::set<std::tuple<double, double>> s;
  for (const auto &p : pts)
    s.emplace(p.x1(), p.x2());
  return s;
}
} // namespace

TEST_CASE("wendland-wu values") {
  CHECK(wendland_wu_profile(0.0) == 1.0);
  CHECK(wendland_wu_profile(1.5) == 0.0);
  CHECK(wendland_wu_profile(1.0) == 0.0);
  CHECK(wendland_wu_profile(0.5) == doctest::Approx(0.0595703125).epsilon(1e-15));
  const TorusPoint c{1.0, -2.0};
  CHECK(wendland_wu_eval(c, c) == 1.0);
  CHECK(wendland_wu_eval(c, c.shifted(0.3, 0.4)) == doctest::Approx(0.0595703125));
  CHECK(wendland_wu_eval(c, c.shifted(1.5, 0.0)) == 0.0);
}

TEST_CASE("property: wendland-wu range, support and Lipschitz bound") {
  Gen g(31);
  const auto f = TargetFunction::wendland_wu({0.5, 0.5});
  for (int i = 0; i < 2000; ++i) {
    const auto x = g.point();
    const double v = f(x);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (geodesic_distance(x, {0.5, 0.5}) >= 1.0)
      CHECK(v == 0.0);
  }
  double L = 0.0;
  for (int i = 1; i <= 12000; ++i) {
    const double u = i * 1e-4;
    L = std::max(L, std::abs(wendland_wu_profile(u) - wendland_wu_profile(u - 1e-4)) / 1e-4);
  }
  CHECK(L < 3.0);
}

TEST_CASE("target functions") {
  const auto w = TargetFunction::wendland_wu();
  CHECK(w.smoothness() == 6.0);
  CHECK(w({0, 0}) == 1.0);
  const auto m = TargetFunction::mode({2, 1});
  CHECK(std::isinf(m.smoothness()));
  CHECK(m({0.3, 0.2}) == doctest::Approx(std::cos(0.8) / kTwoPi));
  const auto c = TargetFunction::custom([](TorusPoint x) { return x.x1(); }, 2.5, "identity");
  CHECK(c.smoothness() == 2.5);
  CHECK(c({0.25, 1.0}) == 0.25);
  CHECK(c.describe().find("identity") != std::string::npos);
  CHECK(m.as_function()({0.3, 0.2}) == m({0.3, 0.2}));
}

TEST_CASE("noise descriptors") {
  CHECK(NoiseModel::none().descriptor() == "none");
  CHECK(NoiseModel::parse("none", 0).kind == NoiseModel::Kind::none);
  const auto u = NoiseModel::parse("uniform:0.1", 4);
  CHECK(u.kind == NoiseModel::Kind::bounded_uniform);
  CHECK(u.level == 0.1);
  CHECK(u.seed == 4);
  CHECK(NoiseModel::parse(u.descriptor(), 4).level == 0.1);
  const auto gs = NoiseModel::gaussian(0.01, 3);
  CHECK(NoiseModel::parse(gs.descriptor(), 3).level == 0.01);
  CHECK(NoiseModel::parse(gs.descriptor(), 3).kind == NoiseModel::Kind::gaussian);
  CHECK_THROWS_AS(NoiseModel::parse("laplace:1", 0), ParseError);
  CHECK_THROWS_AS(NoiseModel::parse("uniform:x", 0), ParseError);
  CHECK_THROWS_AS(NoiseModel::parse("uniform:-1", 0), ParseError);
  CHECK_THROWS_AS(NoiseModel::gaussian(-1.0, 0), PreconditionError);
  CHECK(!NoiseModel::gaussian(0.0, 1).is_noisy());
}

TEST_CASE("clean grid data") {
  const auto target = TargetFunction::wendland_wu();
  const auto d = make_dataset(target, GridSampling{2});
  CHECK(d.size() == 36);
  CHECK(d.points == grid_rule(2).nodes);
  for (std::size_t i = 0; i < d.size(); ++i)
    CHECK(d.values[i] == target(d.points[i]));
  CHECK(d.target.has_value());
}

TEST_CASE("bounded uniform noise statistics") {
  const auto target = TargetFunction::custom([](TorusPoint) { return 0.0; }, 0.0, "zero");
  const auto d = make_dataset(target, RandomSampling{10000, 5}, NoiseModel::bounded_uniform(0.1, 9));
  double sum = 0.0, worst = 0.0;
  for (double v : d.values) {
    sum += v;
    worst = std::max(worst, std::abs(v));
  }
  CHECK(std::abs(sum / 1e4) <= 3 * (0.1 / std::sqrt(3.0)) / 100);
  CHECK(worst <= 0.1);
}

TEST_CASE("gaussian noise statistics") {
  const auto target = TargetFunction::custom([](TorusPoint) { return 0.0; }, 0.0, "zero");
  const auto d = make_dataset(target, GridSampling{40}, NoiseModel::gaussian(0.5, 2));
  double sum = 0.0, sq = 0.0;
  for (double v : d.values) {
    sum += v;
    sq += v * v;
  }
  const double n = double(d.size());
  CHECK(std::abs(sum / n) < 3 * 0.5 / std::sqrt(n));
  CHECK(std::sqrt(sq / n) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("property: generation is reproducible") {
  Gen g(32);
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t s = g.rng.next_u64();
    const auto noise = NoiseModel::gaussian(0.1, s ^ 1);
    const auto a = make_dataset(TargetFunction::wendland_wu(), RandomSampling{200, s}, noise);
    const auto b = make_dataset(TargetFunction::wendland_wu(), RandomSampling{200, s}, noise);
    CHECK(a.points == b.points);
    CHECK(a.values == b.values);
  }
  CHECK(uniform_points(10, 1) != uniform_points(10, 2));
}

TEST_CASE("interleaved shifts") {
  const auto s = interleaved_shifts(2, 4);
  const double d = kPi / 6; // pi / (3 n0)
  REQUIRE(s.size() == 4);
  CHECK(s[0] == std::pair{0.0, 0.0});
  CHECK(s[1].first == doctest::Approx(d));
  CHECK(s[1].second == 0.0);
  CHECK(s[2].first == 0.0);
  CHECK(s[2].second == doctest::Approx(d));
  CHECK(s[3].first == doctest::Approx(d));
  CHECK(s[3].second == doctest::Approx(d));
  CHECK(interleaved_shifts(3, 1) == std::vector<std::pair<double, double>>{{0.0, 0.0}});
}

TEST_CASE("sharding") {
  const auto target = TargetFunction::wendland_wu();
  SUBCASE("m = 1 is the base grid") {
    const auto shards = shard_interleaved(target, 2, 1, {{0.0, 0.0}});
    REQUIRE(shards.size() == 1);
    CHECK(shards[0].points == grid_rule(2).nodes);
  }
  SUBCASE("m = 4 unions to the finer lattice") {
    for (int n0 : {1, 2, 3}) {
      const auto shards = shard_interleaved(target, n0, 4, interleaved_shifts(n0, 4));
      const auto merged = merge_shards(shards);
      CHECK(merged.size() == std::size_t(36 * n0 * n0));
      CHECK(as_set(merged.points).size() == merged.size());
      // Same lattice up to rounding of the shifted coordinates.
      const auto fine = grid_rule(2 * n0).nodes;
      for (const auto &p : merged.points) {
        double best = 1e300;
        for (const auto &q : fine)
          best = std::min(best, geodesic_distance(p, q));
        CHECK(best < 1e-12);
      }
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b) {
          auto sa = as_set(shards[a].points), sb = as_set(shards[b].points);
          std::vector<std::tuple<double, double>> common;
          std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
          CHECK(common.empty());
        }
    }
  }
  SUBCASE("property: disjoint shards for any interleaving") {
    for (int m = 1; m <= 9; ++m) {
      const auto shards = shard_interleaved(target, 2, m, interleaved_shifts(2, m));
      const auto merged = merge_shards(shards);
      CHECK(merged.size() == std::size_t(36 * m));
      CHECK(as_set(merged.points).size() == merged.size());
    }
  }
  SUBCASE("shard noise streams differ and replay") {
    const auto noise = NoiseModel::gaussian(0.1, 77);
    const auto a = shard_interleaved(target, 2, 2, interleaved_shifts(2, 2), noise);
    const auto b = shard_interleaved(target, 2, 2, interleaved_shifts(2, 2), noise);
    CHECK(a[0].values == b[0].values);
    CHECK(a[1].values == b[1].values);
    CHECK(a[0].noise.seed != a[1].noise.seed);
  }
  SUBCASE("invalid shifts") {
    CHECK_THROWS_AS(shard_interleaved(target, 2, 2, {{0.1, 0.1}, {0.1, 0.1}}), PreconditionError);
    // One full grid step apart: same node set.
    CHECK_THROWS_AS(shard_interleaved(target, 2, 2, {{0.0, 0.0}, {kTwoPi / 6, 0.0}}), PreconditionError);
    CHECK_THROWS_AS(shard_interleaved(target, 2, 1, {{-0.1, 0.0}}), PreconditionError);
    CHECK_THROWS_AS(shard_interleaved(target, 2, 1, {{kTwoPi, 0.0}}), PreconditionError);
    CHECK_THROWS_AS(shard_interleaved(target, 2, 2, {{0.0, 0.0}}), PreconditionError);
  }
}

TEST_CASE("round-robin split and merge") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), RandomSampling{10, 3});
  const auto parts = split_round_robin(d, 3);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].size() == 4);
  CHECK(parts[1].size() == 3);
  CHECK(parts[1].points[0] == d.points[1]);
  CHECK(parts[2].values[1] == d.values[5]);
  CHECK(merge_shards(parts).size() == 10);
  CHECK_THROWS_AS(split_round_robin(d, 11), PreconditionError);
  CHECK_THROWS_AS(split_round_robin(d, 0), PreconditionError);
}
