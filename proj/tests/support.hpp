#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fhyper/manifold.hpp"
#include "fhyper/rng.hpp"

namespace fhyper::testing {

/// Hand-rolled generators for the property tests. Every case is addressed by
/// (suite seed, case index) so a failure can be replayed alone.
struct Gen {
  CounterStream rng;
  explicit Gen(std::uint64_t seed) : rng(seed, 42) {}

  double real(double lo, double hi) { return rng.uniform(lo, hi); }
  int integer(int lo, int hi) { return lo + int(rng.next_u64() % std::uint64_t(hi - lo + 1)); }
  TorusPoint point() { return {real(-kPi, kPi), real(-kPi, kPi)}; }
  MultiIndex mode(int max_abs) { return {integer(-max_abs, max_abs), integer(-max_abs, max_abs)}; }
  std::vector<TorusPoint> points(std::size_t n) {
    std::vector<TorusPoint> v;
    for (std::size_t i = 0; i < n; ++i)
      v.push_back(point());
    return v;
  }
  std::vector<double> values(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i)
      v.push_back(real(lo, hi));
    return v;
  }
};

inline std::vector<TorusPoint> grid_points(int G) {
  std::vector<TorusPoint> pts;
  for (const auto &g : reference_grid(G))
    pts.push_back(g.point);
  return pts;
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace fhyper::testing
