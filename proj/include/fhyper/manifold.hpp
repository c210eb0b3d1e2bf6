#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace fhyper {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Lebesgue measure of the torus [-pi, pi)^2.
inline constexpr double kTorusArea = kTwoPi * kTwoPi;

/// Reduce an angle into [-pi, pi).
double wrap_angle(double x);

/// A point on the flat torus T^2. Coordinates are kept reduced into [-pi, pi).
class TorusPoint {
public:
  TorusPoint() = default;
  TorusPoint(double x1, double x2) : x1_(wrap_angle(x1)), x2_(wrap_angle(x2)) {}

  double x1() const { return x1_; }
  double x2() const { return x2_; }

  TorusPoint shifted(double d1, double d2) const { return {x1_ + d1, x2_ + d2}; }

  friend bool operator==(const TorusPoint &, const TorusPoint &) = default;

private:
  double x1_ = 0.0;
  double x2_ = 0.0;
};

/// Lattice frequency k = (k1, k2); its Laplace-Beltrami eigenvalue is |k|.
struct MultiIndex {
  int k1 = 0;
  int k2 = 0;

  std::int64_t norm_sq() const {
    return std::int64_t(k1) * k1 + std::int64_t(k2) * k2;
  }
  double eigenvalue() const;

  friend bool operator==(const MultiIndex &, const MultiIndex &) = default;
};

enum class MeasureConvention {
  lebesgue_2pi, // total mass (2 pi)^2, eigenfunctions carry 1/(2 pi)
  normalized,   // total mass 1, eigenfunctions exp(i k.x)
};

struct WeightedPoint {
  TorusPoint point;
  double weight;
};

/// Spectral data of T^2 with the Laplacian. Stateless; all members are pure.
class TorusSpectrum {
public:
  explicit TorusSpectrum(MeasureConvention convention = MeasureConvention::lebesgue_2pi)
      : convention_(convention) {}

  static constexpr int dimension() { return 2; }
  MeasureConvention convention() const { return convention_; }

  /// Amplitude of every eigenfunction under the active convention.
  double amplitude() const;
  double total_mass() const;

  std::complex<double> eigenfunction(MultiIndex k, TorusPoint x) const;

private:
  MeasureConvention convention_;
};

/// (1 / 2 pi) exp(i k.x), the orthonormal eigenfunction under Lebesgue measure.
std::complex<double> eigenfunction_eval(MultiIndex k, TorusPoint x);

/// Flat-torus distance with wraparound in each coordinate.
double geodesic_distance(TorusPoint x, TorusPoint y);

/// All k with |k| <= max_eigenvalue, ordered by (|k|^2, k1, k2).
std::vector<MultiIndex> enumerate_modes(double max_eigenvalue);

/// All k with |k| < bound (strict), same ordering.
std::vector<MultiIndex> enumerate_modes_below(double bound);

/// G x G equispaced grid with equal weights (2 pi)^2 / G^2. Node (j, l) sits at
/// (2 pi j / G, 2 pi l / G), reduced, in row-major order over (j, l).
std::vector<WeightedPoint> reference_grid(int resolution);

} // namespace fhyper
