#include "fhyper/kernel.hpp"

#include <cmath>

#include "fhyper/error.hpp"

namespace fhyper {

FilteredKernel::FilteredKernel(int degree, const Filter &filter)
    : degree_(degree), filter_(filter) {
  if (degree < 1)
    throw PreconditionError("FilteredKernel: degree must be >= 1");
  for (auto k : enumerate_modes_below(Filter::support_end() * degree))
    table_.push_back({k, filter(k.eigenvalue() / degree)});
}

std::vector<MultiIndex> FilteredKernel::modes() const {
  std::vector<MultiIndex> out;
  out.reserve(table_.size());
  for (const auto &m : table_)
    out.push_back(m.k);
  return out;
}

double FilteredKernel::operator()(TorusPoint x, TorusPoint y) const {
  const double d1 = x.x1() - y.x1();
  const double d2 = x.x2() - y.x2();
  double acc = 0.0;
  for (const auto &m : table_)
    acc += m.weight * std::cos(m.k.k1 * d1 + m.k.k2 * d2);
  return acc / kTorusArea;
}

std::vector<double> FilteredKernel::row(TorusPoint x, std::span<const TorusPoint> ys) const {
  std::vector<double> out(ys.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(ys.size()); ++j)
    out[std::size_t(j)] = (*this)(x, ys[std::size_t(j)]);
  return out;
}

double kernel_eval(const FilteredKernel &kernel, TorusPoint x, TorusPoint y) {
  return kernel(x, y);
}

std::complex<double> fourier_coefficient(const TorusFunction &f, MultiIndex k, int resolution) {
  if (double(resolution) <= 2.0 * k.eigenvalue())
    throw PreconditionError("fourier_coefficient: resolution must exceed 2|k|");
  const auto grid = reference_grid(resolution);
  std::vector<double> re(grid.size()), im(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(grid.size()); ++j) {
    const auto &g = grid[std::size_t(j)];
    const auto term = g.weight * f(g.point) * std::conj(eigenfunction_eval(k, g.point));
    re[std::size_t(j)] = term.real();
    im[std::size_t(j)] = term.imag();
  }
  return {parallel::pairwise_sum(re), parallel::pairwise_sum(im)};
}

SpectralExpansion filtered_approximation(const TorusFunction &f, int degree, int resolution,
                                         const Filter &filter) {
  if (degree < 1)
    throw PreconditionError("filtered_approximation: degree must be >= 1");
  if (resolution < 4 * degree)
    throw PreconditionError("filtered_approximation: resolution must be >= 4n");
  const FilteredKernel kernel(degree, filter);
  const auto grid = reference_grid(resolution);
  std::vector<TorusPoint> nodes(grid.size());
  std::vector<double> amps(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(grid.size()); ++j) {
    nodes[std::size_t(j)] = grid[std::size_t(j)].point;
    amps[std::size_t(j)] = grid[std::size_t(j)].weight * f(grid[std::size_t(j)].point);
  }
  auto modes = kernel.modes();
  auto coeffs = parallel::project(modes, nodes, amps);
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    coeffs[m] *= kernel.table()[m].weight;
  return {std::move(modes), std::move(coeffs)};
}

} // namespace fhyper
