#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fhyper/filter.hpp"
#include "fhyper/manifold.hpp"
#include "fhyper/spectral.hpp"

namespace fhyper {

using TorusFunction = std::function<double(TorusPoint)>;

struct FilteredMode {
  MultiIndex k;
  double weight; // H(|k| / n)
};

/// K_n(x, y) = (2 pi)^-2 sum_k H(|k|/n) exp(i k.(x - y)) over the modes where
/// H is nonzero, i.e. |k| < 2n. Immutable after construction.
class FilteredKernel {
public:
  explicit FilteredKernel(int degree, const Filter &filter = Filter::standard());

  int degree() const { return degree_; }
  const Filter &filter() const { return filter_; }
  std::span<const FilteredMode> table() const { return table_; }
  std::vector<MultiIndex> modes() const;

  double operator()(TorusPoint x, TorusPoint y) const;

  /// K_n(x, y_j) for every y_j, data-parallel.
  std::vector<double> row(TorusPoint x, std::span<const TorusPoint> ys) const;

private:
  int degree_;
  Filter filter_;
  std::vector<FilteredMode> table_;
};

double kernel_eval(const FilteredKernel &kernel, TorusPoint x, TorusPoint y);

/// <f, phi_k> on reference_grid(G). Requires G > 2|k|.
std::complex<double> fourier_coefficient(const TorusFunction &f, MultiIndex k, int resolution);

/// sum_k H(|k|/n) <f, phi_k> phi_k with the inner products taken on
/// reference_grid(G). Requires G >= 4n.
SpectralExpansion filtered_approximation(const TorusFunction &f, int degree, int resolution,
                                         const Filter &filter = Filter::standard());

} // namespace fhyper
