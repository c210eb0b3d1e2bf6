#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fhyper/kernel.hpp"
#include "fhyper/manifold.hpp"

/// Serial, direct-summation versions of the parallel kernels. They evaluate
/// every exponential with its own std::polar call and accumulate in natural
/// order; used as the oracle side in tests and as the baseline in benchmarks.
namespace fhyper::reference {

std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const double> amplitudes);

std::vector<std::complex<double>> synthesize(std::span<const MultiIndex> modes,
                                             std::span<const std::complex<double>> coeffs,
                                             std::span<const TorusPoint> points);

/// sum_i a_i K_n(x, x_i), the kernel-sum form of a filtered hyperinterpolant.
double kernel_sum(const FilteredKernel &kernel, std::span<const TorusPoint> nodes,
                  std::span<const double> amplitudes, TorusPoint x);

} // namespace fhyper::reference
