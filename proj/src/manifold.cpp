#include "fhyper/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fhyper/error.hpp"

namespace fhyper {

double wrap_angle(double x) {
  if (x >= -kPi && x < kPi)
    return x;
  double r = x - kTwoPi * std::floor((x + kPi) / kTwoPi);
  // floor() can leave r on the closed end after rounding
  if (r >= kPi)
    r -= kTwoPi;
  if (r < -kPi)
    r += kTwoPi;
  return r;
}

double MultiIndex::eigenvalue() const { return std::sqrt(double(norm_sq())); }

double TorusSpectrum::amplitude() const {
  return convention_ == MeasureConvention::lebesgue_2pi ? 1.0 / kTwoPi : 1.0;
}

double TorusSpectrum::total_mass() const {
  return convention_ == MeasureConvention::lebesgue_2pi ? kTorusArea : 1.0;
}

std::complex<double> TorusSpectrum::eigenfunction(MultiIndex k, TorusPoint x) const {
  return std::polar(amplitude(), k.k1 * x.x1() + k.k2 * x.x2());
}

std::complex<double> eigenfunction_eval(MultiIndex k, TorusPoint x) {
  return std::polar(1.0 / kTwoPi, k.k1 * x.x1() + k.k2 * x.x2());
}

double geodesic_distance(TorusPoint x, TorusPoint y) {
  auto axis = [](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, kTwoPi - d);
  };
  return std::hypot(axis(x.x1(), y.x1()), axis(x.x2(), y.x2()));
}

namespace {

template <class Keep>
std::vector<MultiIndex> collect_modes(int radius, Keep keep) {
  std::vector<MultiIndex> modes;
  for (int k1 = -radius; k1 <= radius; ++k1)
    for (int k2 = -radius; k2 <= radius; ++k2) {
      MultiIndex k{k1, k2};
      if (keep(k))
        modes.push_back(k);
    }
  std::sort(modes.begin(), modes.end(), [](MultiIndex a, MultiIndex b) {
    return std::tuple(a.norm_sq(), a.k1, a.k2) < std::tuple(b.norm_sq(), b.k1, b.k2);
  });
  return modes;
}

} // namespace

std::vector<MultiIndex> enumerate_modes(double max_eigenvalue) {
  if (!(max_eigenvalue >= 0.0))
    throw PreconditionError("enumerate_modes: max_eigenvalue must be >= 0");
  const double limit = max_eigenvalue * max_eigenvalue * (1.0 + 1e-14);
  return collect_modes(int(std::floor(max_eigenvalue)),
                       [&](MultiIndex k) { return double(k.norm_sq()) <= limit; });
}

std::vector<MultiIndex> enumerate_modes_below(double bound) {
  if (!(bound > 0.0))
    throw PreconditionError("enumerate_modes_below: bound must be > 0");
  const double limit = bound * bound;
  return collect_modes(int(std::ceil(bound)),
                       [&](MultiIndex k) { return double(k.norm_sq()) < limit; });
}

std::vector<WeightedPoint> reference_grid(int resolution) {
  if (resolution < 1)
    throw PreconditionError("reference_grid: resolution must be >= 1");
  const double step = kTwoPi / resolution;
  const double weight = kTorusArea / (double(resolution) * resolution);
  std::vector<WeightedPoint> grid;
  grid.reserve(std::size_t(resolution) * resolution);
  for (int j = 0; j < resolution; ++j)
    for (int l = 0; l < resolution; ++l)
      grid.push_back({TorusPoint(j * step, l * step), weight});
  return grid;
}

} // namespace fhyper
