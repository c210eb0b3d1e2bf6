#include "fhyper/spectral.hpp"

#include <algorithm>
#include <cstdlib>

#include "fhyper/error.hpp"

namespace fhyper {

namespace {

int max_abs_frequency(std::span<const MultiIndex> modes) {
  int m = 0;
  for (auto k : modes)
    m = std::max({m, std::abs(k.k1), std::abs(k.k2)});
  return m;
}

// exp(i k x) for k in [-kmax, kmax], stored at index k + kmax.
void fill_phases(double x, int kmax, std::vector<std::complex<double>> &out) {
  out.resize(std::size_t(2 * kmax + 1));
  for (int k = -kmax; k <= kmax; ++k)
    out[std::size_t(k + kmax)] = std::polar(1.0, k * x);
}

template <class T>
std::vector<T> pairwise_reduce(std::vector<std::vector<T>> partials, std::size_t width) {
  if (partials.empty())
    return std::vector<T>(width, T{});
  for (std::size_t stride = 1; stride < partials.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < partials.size(); i += 2 * stride)
      for (std::size_t k = 0; k < width; ++k)
        partials[i][k] += partials[i + stride][k];
  return std::move(partials.front());
}

template <class Amp>
std::vector<std::complex<double>> project_impl(std::span<const MultiIndex> modes,
                                               std::span<const TorusPoint> points,
                                               std::span<const Amp> amps) {
  if (points.size() != amps.size())
    throw PreconditionError("project: points and amplitudes differ in length");
  const int kmax = max_abs_frequency(modes);
  const std::size_t nblocks = (points.size() + parallel::kBlockSize - 1) / parallel::kBlockSize;
  std::vector<std::vector<std::complex<double>>> partials(
      nblocks, std::vector<std::complex<double>>(modes.size()));

#pragma omp parallel
  {
    std::vector<std::complex<double>> e1, e2;
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(nblocks); ++b) {
      auto &acc = partials[std::size_t(b)];
      const std::size_t lo = std::size_t(b) * parallel::kBlockSize;
      const std::size_t hi = std::min(points.size(), lo + parallel::kBlockSize);
      for (std::size_t i = lo; i < hi; ++i) {
        // conj(exp(i k.x)) = exp(-i k.x)
        fill_phases(-points[i].x1(), kmax, e1);
        fill_phases(-points[i].x2(), kmax, e2);
        const std::complex<double> a = amps[i];
        for (std::size_t m = 0; m < modes.size(); ++m)
          acc[m] += a * (e1[std::size_t(modes[m].k1 + kmax)] * e2[std::size_t(modes[m].k2 + kmax)]);
      }
    }
  }
  auto sum = pairwise_reduce(std::move(partials), modes.size());
  for (auto &c : sum)
    c /= kTwoPi;
  return sum;
}

} // namespace

SpectralExpansion::SpectralExpansion(std::vector<MultiIndex> modes,
                                     std::vector<std::complex<double>> coeffs)
    : modes_(std::move(modes)), coeffs_(std::move(coeffs)), max_freq_(max_abs_frequency(modes_)) {
  if (modes_.size() != coeffs_.size())
    throw PreconditionError("SpectralExpansion: modes and coefficients differ in length");
}

std::complex<double> SpectralExpansion::evaluate_complex(TorusPoint x) const {
  const TorusPoint one[] = {x};
  return parallel::synthesize(modes_, coeffs_, one).front();
}

std::vector<std::complex<double>>
SpectralExpansion::evaluate_complex(std::span<const TorusPoint> xs) const {
  return parallel::synthesize(modes_, coeffs_, xs);
}

std::vector<double> SpectralExpansion::evaluate(std::span<const TorusPoint> xs) const {
  auto z = evaluate_complex(xs);
  std::vector<double> out(z.size());
  std::transform(z.begin(), z.end(), out.begin(), [](auto v) { return v.real(); });
  return out;
}

namespace parallel {

std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const std::complex<double>> amplitudes) {
  return project_impl(modes, points, amplitudes);
}

std::vector<std::complex<double>> project(std::span<const MultiIndex> modes,
                                          std::span<const TorusPoint> points,
                                          std::span<const double> amplitudes) {
  return project_impl(modes, points, amplitudes);
}

std::vector<std::complex<double>> synthesize(std::span<const MultiIndex> modes,
                                             std::span<const std::complex<double>> coeffs,
                                             std::span<const TorusPoint> points) {
  if (modes.size() != coeffs.size())
    throw PreconditionError("synthesize: modes and coefficients differ in length");
  const int kmax = max_abs_frequency(modes);
  std::vector<std::complex<double>> out(points.size());
  // Single points come through evaluate(TorusPoint); skip the thread team.
#pragma omp parallel if (points.size() > 16)
  {
    std::vector<std::complex<double>> e1, e2;
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(points.size()); ++j) {
      fill_phases(points[std::size_t(j)].x1(), kmax, e1);
      fill_phases(points[std::size_t(j)].x2(), kmax, e2);
      std::complex<double> acc{};
      for (std::size_t m = 0; m < modes.size(); ++m)
        acc += coeffs[m] * (e1[std::size_t(modes[m].k1 + kmax)] * e2[std::size_t(modes[m].k2 + kmax)]);
      out[std::size_t(j)] = acc / kTwoPi;
    }
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t nblocks = (values.size() + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<double>> partials(nblocks, std::vector<double>(1, 0.0));
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(values.size(), lo + kBlockSize);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += values[i];
    partials[b][0] = s;
  }
  return pairwise_reduce(std::move(partials), 1).front();
}

} // namespace parallel

} // namespace fhyper
