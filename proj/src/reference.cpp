#include "fhyper/reference.hpp"

#include "fhyper/error.hpp"

namespace fhyper::reference {

std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const double> amplitudes) {
  if (points.size() != amplitudes.size())
    throw PreconditionError("reference::project: size mismatch");
  std::vector<std::complex<double>> out(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < points.size(); ++i)
      acc += amplitudes[i] * std::conj(eigenfunction_eval(modes[m], points[i]));
    out[m] = acc;
  }
  return out;
}

std::vector<std::complex<double>> synthesize(std::span<const MultiIndex> modes,
                                             std::span<const std::complex<double>> coeffs,
                                             std::span<const TorusPoint> points) {
  std::vector<std::complex<double>> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::complex<double> acc{};
    for (std::size_t m = 0; m < modes.size(); ++m)
      acc += coeffs[m] * eigenfunction_eval(modes[m], points[j]);
    out[j] = acc;
  }
  return out;
}

double kernel_sum(const FilteredKernel &kernel, std::span<const TorusPoint> nodes,
                  std::span<const double> amplitudes, TorusPoint x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc += amplitudes[i] * kernel(x, nodes[i]);
  return acc;
}

} // namespace fhyper::reference
