#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fhyper/data.hpp"
#include "fhyper/kernel.hpp"
#include "fhyper/quadrature.hpp"
#include "fhyper/spectral.hpp"

namespace fhyper {

/// Filtered hyperinterpolant V_{D,n}(x) = sum_i w_i y_i K_n(x, x_i), stored in
/// coefficient form c_k = H(|k|/n) sum_i w_i y_i conj(phi_k(x_i)).
class NdfhEstimator {
public:
  NdfhEstimator() = default;
  NdfhEstimator(int degree, Filter filter, std::vector<TorusPoint> nodes,
                std::vector<double> weighted_values, bool degenerate);

  int degree() const { return degree_; }
  const Filter &filter() const { return filter_; }
  const SpectralExpansion &expansion() const { return expansion_; }
  std::span<const TorusPoint> nodes() const { return nodes_; }
  /// w_i y_i with Lebesgue weights.
  std::span<const double> weighted_values() const { return weighted_values_; }
  bool degenerate() const { return degenerate_; }

  double operator()(TorusPoint x) const { return expansion_.evaluate(x); }
  std::vector<double> evaluate(std::span<const TorusPoint> xs) const { return expansion_.evaluate(xs); }

  /// Direct kernel-sum form; agrees with the coefficient form up to rounding.
  double evaluate_kernel_sum(TorusPoint x) const;

  /// max |Im V(x_j)| over the given points.
  double imaginary_residual(std::span<const TorusPoint> xs) const;

private:
  int degree_ = 0;
  Filter filter_ = Filter::standard();
  std::vector<TorusPoint> nodes_;
  std::vector<double> weighted_values_;
  SpectralExpansion expansion_;
  bool degenerate_ = false;
};

/// Requires rule.nodes == data.points (same order) and degree >= 1.
NdfhEstimator fit_ndfh(const Dataset &data, int degree, const QuadratureRule &rule,
                       const Filter &filter = Filter::standard());

/// sum_j |D_j| / |D| V_{D_j,n}.
class DfhEstimator {
public:
  DfhEstimator(std::vector<NdfhEstimator> shards, std::vector<std::size_t> shard_sizes);

  int degree() const { return shards_.front().degree(); }
  std::size_t servers() const { return shards_.size(); }
  std::size_t total_size() const { return total_; }
  std::span<const NdfhEstimator> shards() const { return shards_; }
  std::span<const std::size_t> shard_sizes() const { return sizes_; }
  double synthesis_weight(std::size_t j) const { return double(sizes_[j]) / double(total_); }
  std::vector<std::size_t> degenerate_shards() const;

  /// Convex combination of the shard values, computed in shard order and kept
  /// inside [min_j V_j(x), max_j V_j(x)].
  double operator()(TorusPoint x) const;
  std::vector<double> evaluate(std::span<const TorusPoint> xs) const;

  /// Single expansion with coefficients sum_j |D_j|/|D| c_k^(j).
  SpectralExpansion merged_expansion() const;

  double imaginary_residual(std::span<const TorusPoint> xs) const;

private:
  std::vector<NdfhEstimator> shards_;
  std::vector<std::size_t> sizes_;
  std::size_t total_ = 0;
};

/// Fits each shard independently (in parallel) and synthesizes. Grid rules must
/// be exact to degree 3n - 1; solved rules must carry the same gate m.
DfhEstimator fit_dfh(const std::vector<Dataset> &shards, int degree,
                     const std::vector<QuadratureRule> &rules, int servers,
                     const Filter &filter = Filter::standard());

struct NoisyDeterministic {};
struct NoisyRandom {
  double tau;
};
using SamplingRegime = std::variant<NoisyDeterministic, NoisyRandom>;

/// floor(N^(r / (r + d/2))) for deterministic samples, floor(N^((r - tau/2) /
/// (r + d/2))) for random samples. Infinite r gives N.
std::size_t server_count_bound(std::size_t total, double smoothness, int dimension,
                               const SamplingRegime &regime);

struct DegreeWindow {
  double lower;
  double upper;
};

/// [c3/6, c3/2] * N^(1/(2r+d)); a suggestion, never enforced.
DegreeWindow suggest_degree_window(std::size_t total, double smoothness, int dimension,
                                   double c3 = 3.0);

} // namespace fhyper
