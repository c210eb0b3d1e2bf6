#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "fhyper/data.hpp"
#include "fhyper/error.hpp"
#include "fhyper/estimator.hpp"
#include "fhyper/experiments.hpp"
#include "fhyper/quadrature.hpp"
#include "support.hpp"

using namespace fhyper;
using fhyper::testing::Gen;
using fhyper::testing::grid_points;

namespace {

Dataset with_values(Dataset d, std::vector<double> v) {
  d.values = std::move(v);
  return d;
}

double sup_gap(const NdfhEstimator &e, const TargetFunction &f, int G) {
  double worst = 0.0;
  for (const auto &x : grid_points(G))
    worst = std::max(worst, std::abs(e(x) - f(x)));
  return worst;
}

} // namespace

TEST_CASE("reproduction of a low mode") {
  const auto target = TargetFunction::mode({1, 0});
  const auto est = fit_ndfh(make_dataset(target, GridSampling{2}), 2, grid_rule(2));
  CHECK(sup_gap(est, target, 16) < 1e-10);
  CHECK(est.degree() == 2);
  CHECK(!est.degenerate());
}

TEST_CASE("property: every mode |k| <= n is reproduced") {
  for (int n : {1, 2, 4}) {
    const auto rule = grid_rule(n);
    for (const auto &k : enumerate_modes(n)) {
      const auto target = TargetFunction::mode(k);
      const auto est = fit_ndfh(make_dataset(target, GridSampling{n}), n, rule);
      CHECK(sup_gap(est, target, 8 * n) < 1e-10);
    }
  }
}

TEST_CASE("zero data gives the zero estimator") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{3});
  const auto est = fit_ndfh(with_values(d, std::vector<double>(d.size(), 0.0)), 3, grid_rule(3));
  for (const auto &c : est.expansion().coefficients())
    CHECK(c == std::complex<double>(0.0, 0.0));
}

TEST_CASE("a mode outside the kernel support is annihilated") {
  const auto target = TargetFunction::mode({5, 0});
  const auto est = fit_ndfh(make_dataset(target, GridSampling{4}), 1, grid_rule(4));
  const auto zero = TargetFunction::custom([](TorusPoint) { return 0.0; }, 0.0, "zero");
  CHECK(std::sqrt(l2_sq_error(est, zero, 16).value) < 1e-10);
}

TEST_CASE("coefficient table") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{4});
  const auto est = fit_ndfh(d, 4, grid_rule(4));
  const auto modes = est.expansion().modes();
  CHECK(modes.size() == 193);
  for (const auto &k : modes)
    CHECK(k.norm_sq() < 64);
  CHECK(est.expansion().max_frequency() == 7);
}

TEST_CASE("property: coefficient form equals kernel sum") {
  Gen g(41);
  for (int t = 0; t < 10; ++t) {
    const int n = g.integer(1, 5);
    const auto pts = g.points(std::size_t(g.integer(30, 200)));
    auto rule = grid_rule(1);
    rule.nodes = pts;
    rule.weights = g.values(pts.size(), 0.0, 0.5);
    Dataset d;
    d.points = pts;
    d.values = g.values(pts.size());
    const auto est = fit_ndfh(d, n, rule);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto x = g.point();
      worst = std::max(worst, std::abs(est(x) - est.evaluate_kernel_sum(x)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("property: linearity in the data") {
  Gen g(42);
  const auto rule = grid_rule(3);
  const auto base = make_dataset(TargetFunction::wendland_wu(), GridSampling{3});
  const auto probe = g.points(50);
  for (int t = 0; t < 10; ++t) {
    const double a = g.real(-3, 3), b = g.real(-3, 3);
    const auto y1 = g.values(base.size()), y2 = g.values(base.size());
    std::vector<double> mix(base.size());
    for (std::size_t i = 0; i < mix.size(); ++i)
      mix[i] = a * y1[i] + b * y2[i];
    const auto e1 = fit_ndfh(with_values(base, y1), 3, rule);
    const auto e2 = fit_ndfh(with_values(base, y2), 3, rule);
    const auto e = fit_ndfh(with_values(base, mix), 3, rule);
    for (const auto &x : probe)
      CHECK(std::abs(e(x) - (a * e1(x) + b * e2(x))) < 1e-12);
  }
}

TEST_CASE("real-valued output on symmetric data") {
  const auto d = make_dataset(TargetFunction::wendland_wu({0.3, -0.4}), GridSampling{5},
                              NoiseModel::gaussian(0.1, 3));
  const auto est = fit_ndfh(d, 5, grid_rule(5));
  CHECK(est.imaginary_residual(grid_points(40)) < 1e-12);
}

TEST_CASE("fit_ndfh preconditions") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{2});
  CHECK_THROWS_AS(fit_ndfh(d, 0, grid_rule(2)), PreconditionError);
  CHECK_THROWS_AS(fit_ndfh(d, 2, grid_rule(2, 0.1, 0.0)), PreconditionError);
  CHECK_THROWS_AS(fit_ndfh(d, 2, grid_rule(3)), PreconditionError);
}

TEST_CASE("DFH with one shard is the NDFH") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{4}, NoiseModel::gaussian(0.05, 1));
  const auto rule = grid_rule(4);
  const auto ndfh = fit_ndfh(d, 4, rule);
  const auto dfh = fit_dfh({d}, 4, {rule}, 1);
  CHECK(dfh.synthesis_weight(0) == 1.0);
  for (const auto &x : uniform_points(100, 5))
    CHECK(std::abs(dfh(x) - ndfh(x)) <= 1e-14);
}

TEST_CASE("DFH of identical shards equals the shard estimator") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{3});
  const auto e = fit_ndfh(d, 3, grid_rule(3));
  const DfhEstimator dfh({e, e}, {d.size(), d.size()});
  for (const auto &x : uniform_points(100, 6))
    CHECK(dfh(x) == e(x));
}

TEST_CASE("synthesis weights") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), GridSampling{2});
  const auto e = fit_ndfh(d, 2, grid_rule(2));
  const DfhEstimator dfh({e, e}, {10, 30});
  CHECK(dfh.synthesis_weight(0) == 0.25);
  CHECK(dfh.synthesis_weight(1) == 0.75);
  CHECK(dfh.total_size() == 40);
  Gen g(43);
  for (int t = 0; t < 50; ++t) {
    const int m = g.integer(1, 12);
    std::vector<NdfhEstimator> es(std::size_t(m), e);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (int j = 0; j < m; ++j) {
      sizes.push_back(std::size_t(g.integer(1, 1000)));
      total += sizes.back();
    }
    const DfhEstimator x(es, sizes);
    std::size_t num = 0;
    for (int j = 0; j < m; ++j)
      num += sizes[std::size_t(j)];
    CHECK(num == total); // weights are sizes over the exact integer total
    double s = 0.0;
    for (int j = 0; j < m; ++j)
      s += x.synthesis_weight(std::size_t(j));
    CHECK(std::abs(s - 1.0) <= m * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("property: DFH is a convex combination, exactly") {
  Gen g(44);
  const auto target = TargetFunction::wendland_wu();
  for (int t = 0; t < 5; ++t) {
    const int m = g.integer(2, 6);
    const int n = g.integer(1, 4);
    const auto shifts = interleaved_shifts(n, m);
    const auto shards = shard_interleaved(target, n, m, shifts, NoiseModel::gaussian(0.2, g.rng.next_u64()));
    std::vector<QuadratureRule> rules;
    for (const auto &[a, b] : shifts)
      rules.push_back(grid_rule(n, a, b));
    const auto dfh = fit_dfh(shards, n, rules, m);
    for (int i = 0; i < 200; ++i) {
      const auto x = g.point();
      double lo = 1e300, hi = -1e300;
      for (const auto &s : dfh.shards()) {
        lo = std::min(lo, s(x));
        hi = std::max(hi, s(x));
      }
      const double v = dfh(x);
      CHECK(lo <= v);
      CHECK(v <= hi);
    }
  }
}

TEST_CASE("DFH zero data, merged expansion and shard order") {
  const auto target = TargetFunction::wendland_wu();
  const int n = 3, m = 4;
  const auto shifts = interleaved_shifts(n, m);
  auto shards = shard_interleaved(target, n, m, shifts, NoiseModel::gaussian(0.1, 8));
  std::vector<QuadratureRule> rules;
  for (const auto &[a, b] : shifts)
    rules.push_back(grid_rule(n, a, b));
  const auto dfh = fit_dfh(shards, n, rules, m);
  const auto merged = dfh.merged_expansion();
  const auto probe = uniform_points(100, 9);
  for (const auto &x : probe)
    CHECK(std::abs(merged.evaluate(x) - dfh(x)) < 1e-14);

  auto rs = shards;
  auto rr = rules;
  std::reverse(rs.begin(), rs.end());
  std::reverse(rr.begin(), rr.end());
  const auto rev = fit_dfh(rs, n, rr, m);
  for (const auto &x : probe)
    CHECK(std::abs(rev(x) - dfh(x)) < 1e-15);

  for (auto &s : shards)
    std::fill(s.values.begin(), s.values.end(), 0.0);
  const auto zero = fit_dfh(shards, n, rules, m);
  for (const auto &x : probe)
    CHECK(zero(x) == 0.0);
}

TEST_CASE("DFH fitting does not depend on the thread count") {
  const auto target = TargetFunction::wendland_wu();
  const int n = 4, m = 9;
  const auto shifts = interleaved_shifts(n, m);
  const auto shards = shard_interleaved(target, n, m, shifts, NoiseModel::gaussian(0.1, 1));
  std::vector<QuadratureRule> rules;
  for (const auto &[a, b] : shifts)
    rules.push_back(grid_rule(n, a, b));
  const auto probe = uniform_points(300, 2);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto ref = fit_dfh(shards, n, rules, m).evaluate(probe);
  for (int t : {2, 4, 5}) {
    omp_set_num_threads(t);
    CHECK(fit_dfh(shards, n, rules, m).evaluate(probe) == ref);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("degenerate shard rules give flagged zero shards") {
  const auto target = TargetFunction::wendland_wu();
  const int m = 2000;
  auto all = make_dataset(target, RandomSampling{2 * 300, 4});
  auto parts = split_round_robin(all, 2);
  std::vector<QuadratureRule> rules;
  for (const auto &p : parts)
    rules.push_back(solve_random_weights(p.points, 2, m));
  REQUIRE(rules[0].degenerate);
  std::vector<Dataset> shards(parts.begin(), parts.end());
  // Only two shards are simulated here; the gate m is what matters for the rule.
  CHECK_THROWS_AS(fit_dfh(shards, 2, rules, 2), PreconditionError);
  for (auto &r : rules)
    r = apply_weight_gate(solve_random_weights(r.nodes, 2, 2), 2);
  rules[1] = apply_weight_gate(solve_random_weights(parts[1].points, 2, m), m);
  std::get<SolvedProvenance>(rules[1].provenance).gate_servers = 2;
  const auto dfh = fit_dfh(shards, 2, rules, 2);
  CHECK(dfh.degenerate_shards() == std::vector<std::size_t>{1});
  CHECK(dfh.shards()[1].degenerate());
  for (const auto &c : dfh.shards()[1].expansion().coefficients())
    CHECK(c == std::complex<double>(0.0, 0.0));
}

TEST_CASE("fit_dfh preconditions") {
  const auto target = TargetFunction::wendland_wu();
  const auto shards = shard_interleaved(target, 1, 1, {{0.0, 0.0}});
  // grid_rule(1) is exact to degree 2 < 3 * 2 - 1.
  CHECK_THROWS_AS(fit_dfh(shards, 2, {grid_rule(1)}, 1), PreconditionError);
  CHECK_THROWS_AS(fit_dfh(shards, 1, {grid_rule(1)}, 0), PreconditionError);
  CHECK_THROWS_AS(fit_dfh(shards, 1, {grid_rule(1), grid_rule(1)}, 1), PreconditionError);
  CHECK_THROWS_AS(fit_dfh(shards, 1, {grid_rule(1, 0.2, 0.0)}, 1), PreconditionError);
  const auto d = make_dataset(target, RandomSampling{100, 1});
  const auto r = solve_random_weights(d.points, 2, 3);
  CHECK_THROWS_AS(fit_dfh({d}, 2, {r}, 1), PreconditionError);
  CHECK_THROWS_AS(fit_dfh({d}, 3, {solve_random_weights(d.points, 2, 1)}, 1), PreconditionError);
}

TEST_CASE("interleaved DFH parity and noise plateau") {
  const auto target = TargetFunction::wendland_wu();
  const int n = 8, m = 4;
  const auto shifts = interleaved_shifts(n, m);
  std::vector<QuadratureRule> rules;
  for (const auto &[a, b] : shifts)
    rules.push_back(grid_rule(n, a, b));

  const auto dfh = fit_dfh(shard_interleaved(target, n, m, shifts), n, rules, m);
  const auto ndfh = fit_ndfh(make_dataset(target, GridSampling{2 * n}), n, grid_rule(2 * n));
  const double ratio = l2_sq_error(dfh, target, 64).value / l2_sq_error(ndfh, target, 64).value;
  CHECK(ratio <= 4.0);
  CHECK(ratio >= 0.25);

  const double sigma = 0.01;
  const auto noisy = shard_interleaved(target, n, m, shifts, NoiseModel::gaussian(sigma, 12));
  const auto est = fit_dfh(noisy, n, rules, m);
  const double mse = train_mse(evaluator_of(est), merge_shards(noisy));
  CHECK(mse >= 0.5 * sigma * sigma);
  CHECK(mse <= 2.0 * sigma * sigma);
}

TEST_CASE("server count bound") {
  CHECK(server_count_bound(10000, 6, 2, NoisyDeterministic{}) == 2682);
  CHECK(server_count_bound(10000, 6, 2, NoisyRandom{1.0}) == 1389);
  CHECK(server_count_bound(10000, std::numeric_limits<double>::infinity(), 2, NoisyDeterministic{}) == 10000);
  CHECK(server_count_bound(10000, 1e9, 2, NoisyDeterministic{}) >= 9999);
  CHECK_THROWS_AS(server_count_bound(10000, 1.0, 2, NoisyDeterministic{}), PreconditionError);
  CHECK_THROWS_AS(server_count_bound(10000, 6, 2, NoisyRandom{0.0}), PreconditionError);
  CHECK_THROWS_AS(server_count_bound(10000, 6, 2, NoisyRandom{12.0}), PreconditionError);
  CHECK_THROWS_AS(server_count_bound(0, 6, 2, NoisyDeterministic{}), PreconditionError);
}

TEST_CASE("degree window") {
  const auto w = suggest_degree_window(2304, 6, 2);
  const double base = std::pow(2304.0, 1.0 / 14.0);
  CHECK(w.lower == doctest::Approx(0.5 * base));
  CHECK(w.upper == doctest::Approx(1.5 * base));
}
