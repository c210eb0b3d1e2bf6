#include "fhyper/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "fhyper/error.hpp"

namespace fhyper {

NdfhEstimator::NdfhEstimator(int degree, Filter filter, std::vector<TorusPoint> nodes,
                             std::vector<double> weighted_values, bool degenerate)
    : degree_(degree), filter_(std::move(filter)), nodes_(std::move(nodes)),
      weighted_values_(std::move(weighted_values)), degenerate_(degenerate) {
  const FilteredKernel kernel(degree_, filter_);
  auto modes = kernel.modes();
  auto coeffs = parallel::project(modes, nodes_, weighted_values_);
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    coeffs[m] *= kernel.table()[m].weight;
  expansion_ = SpectralExpansion(std::move(modes), std::move(coeffs));
}

double NdfhEstimator::evaluate_kernel_sum(TorusPoint x) const {
  const FilteredKernel kernel(degree_, filter_);
  std::vector<double> terms(nodes_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(nodes_.size()); ++i)
    terms[std::size_t(i)] = weighted_values_[std::size_t(i)] * kernel(x, nodes_[std::size_t(i)]);
  return parallel::pairwise_sum(terms);
}

double NdfhEstimator::imaginary_residual(std::span<const TorusPoint> xs) const {
  double worst = 0.0;
  for (auto v : expansion_.evaluate_complex(xs))
    worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

NdfhEstimator fit_ndfh(const Dataset &data, int degree, const QuadratureRule &rule,
                       const Filter &filter) {
  if (degree < 1)
    throw PreconditionError("fit_ndfh: degree must be >= 1");
  if (data.points.size() != data.values.size())
    throw PreconditionError("fit_ndfh: dataset points and values differ in length");
  if (rule.nodes.size() != rule.weights.size())
    throw PreconditionError("fit_ndfh: rule nodes and weights differ in length");
  if (rule.nodes != data.points)
    throw PreconditionError("fit_ndfh: quadrature nodes do not match data points");
  const auto w = rule.lebesgue_weights();
  std::vector<double> wy(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    wy[i] = w[i] * data.values[i];
  return NdfhEstimator(degree, filter, data.points, std::move(wy), rule.degenerate);
}

DfhEstimator::DfhEstimator(std::vector<NdfhEstimator> shards, std::vector<std::size_t> shard_sizes)
    : shards_(std::move(shards)), sizes_(std::move(shard_sizes)) {
  if (shards_.empty())
    throw PreconditionError("DfhEstimator: need at least one shard");
  if (shards_.size() != sizes_.size())
    throw PreconditionError("DfhEstimator: one size per shard required");
  for (const auto &s : shards_)
    if (s.degree() != shards_.front().degree())
      throw PreconditionError("DfhEstimator: shards must share the degree");
  for (auto s : sizes_) {
    if (s == 0)
      throw PreconditionError("DfhEstimator: empty shard");
    total_ += s;
  }
}

std::vector<std::size_t> DfhEstimator::degenerate_shards() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < shards_.size(); ++j)
    if (shards_[j].degenerate())
      out.push_back(j);
  return out;
}

double DfhEstimator::operator()(TorusPoint x) const {
  const TorusPoint one[] = {x};
  return evaluate(one).front();
}

std::vector<double> DfhEstimator::evaluate(std::span<const TorusPoint> xs) const {
  std::vector<std::vector<double>> per_shard;
  per_shard.reserve(shards_.size());
  for (const auto &s : shards_)
    per_shard.push_back(s.evaluate(xs));
  std::vector<double> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) {
    double acc = 0.0, lo = per_shard[0][p], hi = per_shard[0][p];
    for (std::size_t j = 0; j < shards_.size(); ++j) {
      const double v = per_shard[j][p];
      acc += synthesis_weight(j) * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out[p] = std::clamp(acc, lo, hi);
  }
  return out;
}

SpectralExpansion DfhEstimator::merged_expansion() const {
  const auto modes = shards_.front().expansion().modes();
  std::vector<std::complex<double>> coeffs(modes.size());
  for (std::size_t j = 0; j < shards_.size(); ++j) {
    const auto c = shards_[j].expansion().coefficients();
    const double w = synthesis_weight(j);
    for (std::size_t m = 0; m < coeffs.size(); ++m)
      coeffs[m] += w * c[m];
  }
  return {std::vector<MultiIndex>(modes.begin(), modes.end()), std::move(coeffs)};
}

double DfhEstimator::imaginary_residual(std::span<const TorusPoint> xs) const {
  double worst = 0.0;
  for (auto v : merged_expansion().evaluate_complex(xs))
    worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

DfhEstimator fit_dfh(const std::vector<Dataset> &shards, int degree,
                     const std::vector<QuadratureRule> &rules, int servers, const Filter &filter) {
  if (servers < 1)
    throw PreconditionError("fit_dfh: m must be >= 1");
  if (shards.size() != std::size_t(servers) || rules.size() != shards.size())
    throw PreconditionError("fit_dfh: need exactly m shards and m rules");
  if (degree < 1)
    throw PreconditionError("fit_dfh: degree must be >= 1");
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const auto &rule = rules[j];
    if (rule.nodes != shards[j].points)
      throw PreconditionError("fit_dfh: rule " + std::to_string(j) + " nodes do not match shard points");
    if (std::holds_alternative<GridProvenance>(rule.provenance)) {
      if (!rule.exactness_degree || *rule.exactness_degree < 3 * degree - 1)
        throw PreconditionError("fit_dfh: shard " + std::to_string(j) +
                                " rule is not exact to degree 3n-1");
    } else {
      const auto &p = std::get<SolvedProvenance>(rule.provenance);
      if (p.gate_servers != servers)
        throw PreconditionError("fit_dfh: shard " + std::to_string(j) +
                                " rule was gated for a different server count");
      if (!rule.degenerate && (!rule.exactness_degree || *rule.exactness_degree < degree))
        throw PreconditionError("fit_dfh: shard " + std::to_string(j) +
                                " rule is not exact to degree n");
    }
  }

  std::vector<NdfhEstimator> fitted(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(shards.size()); ++j) {
    try {
      fitted[std::size_t(j)] = fit_ndfh(shards[std::size_t(j)], degree, rules[std::size_t(j)], filter);
    } catch (...) {
      errors[std::size_t(j)] = std::current_exception();
    }
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  std::vector<std::size_t> sizes;
  for (const auto &s : shards)
    sizes.push_back(s.size());
  return DfhEstimator(std::move(fitted), std::move(sizes));
}

std::size_t server_count_bound(std::size_t total, double smoothness, int dimension,
                               const SamplingRegime &regime) {
  if (total < 1)
    throw PreconditionError("server_count_bound: N must be >= 1");
  if (dimension < 1)
    throw PreconditionError("server_count_bound: d must be >= 1");
  const double half_d = dimension / 2.0;
  if (!(smoothness > half_d))
    throw PreconditionError("server_count_bound: need r > d/2");
  double exponent;
  if (std::isinf(smoothness)) {
    exponent = 1.0;
  } else if (const auto *r = std::get_if<NoisyRandom>(&regime)) {
    if (!(r->tau > 0.0 && r->tau < 2.0 * smoothness))
      throw PreconditionError("server_count_bound: need 0 < tau < 2r");
    exponent = (smoothness - r->tau / 2.0) / (smoothness + half_d);
  } else {
    exponent = smoothness / (smoothness + half_d);
  }
  // Nudge so exact integer powers are not floored below themselves.
  const double bound = std::floor(std::pow(double(total), exponent) * (1.0 + 1e-12));
  return std::max<std::size_t>(1, std::size_t(bound));
}

DegreeWindow suggest_degree_window(std::size_t total, double smoothness, int dimension, double c3) {
  if (total < 1 || dimension < 1 || !(smoothness > 0.0))
    throw PreconditionError("suggest_degree_window: invalid parameters");
  const double base = std::pow(double(total), 1.0 / (2.0 * smoothness + dimension));
  return {c3 / 6.0 * base, c3 / 2.0 * base};
}

} // namespace fhyper
