#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fhyper/manifold.hpp"

namespace fhyper {

/// A trigonometric polynomial sum_k c_k phi_k(x) with phi_k = exp(i k.x) / (2 pi).
class SpectralExpansion {
public:
  SpectralExpansion() = default;
  SpectralExpansion(std::vector<MultiIndex> modes, std::vector<std::complex<double>> coeffs);

  std::span<const MultiIndex> modes() const { return modes_; }
  std::span<const std::complex<double>> coefficients() const { return coeffs_; }
  int max_frequency() const { return max_freq_; }

  std::complex<double> evaluate_complex(TorusPoint x) const;
  double evaluate(TorusPoint x) const { return evaluate_complex(x).real(); }
  std::vector<std::complex<double>> evaluate_complex(std::span<const TorusPoint> xs) const;
  std::vector<double> evaluate(std::span<const TorusPoint> xs) const;

private:
  std::vector<MultiIndex> modes_;
  std::vector<std::complex<double>> coeffs_;
  int max_freq_ = 0;
};

/// OpenMP kernels. Results are bitwise independent of the thread count: work is
/// split into fixed-size blocks and partial results are combined in a fixed
/// pairwise order.
namespace parallel {

inline constexpr std::size_t kBlockSize = 256;

/// c_k = sum_i a_i conj(phi_k(x_i)) for every mode k.
std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const std::complex<double>> amplitudes);

/// Real-valued amplitudes variant of project().
std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const double> amplitudes);

/// v_j = sum_k c_k phi_k(x_j) for every point x_j.
std::vector<std::complex<double>> synthesize(std::span<const MultiIndex> modes,
                                             std::span<const std::complex<double>> coeffs,
                                             std::span<const TorusPoint> points);

/// Pairwise (tree) summation over fixed blocks.
double pairwise_sum(std::span<const double> values);

} // namespace parallel

} // namespace fhyper
