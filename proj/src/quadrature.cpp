#include "fhyper/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fhyper/spectral.hpp"

namespace fhyper {

std::vector<double> QuadratureRule::lebesgue_weights() const {
  if (measure == MeasureConvention::lebesgue_2pi)
    return weights;
  std::vector<double> out(weights);
  for (double &w : out)
    w *= kTorusArea;
  return out;
}

double QuadratureRule::sum_sq_weights() const {
  return std::inner_product(weights.begin(), weights.end(), weights.begin(), 0.0);
}

std::vector<TorusPoint> grid_nodes(int n0, double shift1, double shift2) {
  if (n0 < 1)
    throw PreconditionError("grid_nodes: n0 must be >= 1");
  const int side = 3 * n0;
  std::vector<TorusPoint> nodes;
  nodes.reserve(std::size_t(side) * side);
  for (int j = 0; j < side; ++j)
    for (int l = 0; l < side; ++l)
      nodes.emplace_back(2.0 * j * kPi / side + shift1, 2.0 * l * kPi / side + shift2);
  return nodes;
}

QuadratureRule grid_rule(int n0, double shift1, double shift2) {
  QuadratureRule rule;
  rule.nodes = grid_nodes(n0, shift1, shift2);
  rule.weights.assign(rule.nodes.size(), kTorusArea / double(rule.nodes.size()));
  rule.exactness_degree = 3 * n0 - 1;
  rule.measure = MeasureConvention::lebesgue_2pi;
  rule.provenance = GridProvenance{n0, shift1, shift2};
  return rule;
}

std::vector<ModeResidual> exactness_residuals(const QuadratureRule &rule, int degree) {
  if (degree < 0)
    throw PreconditionError("exactness_residuals: degree must be >= 0");
  const auto modes = enumerate_modes(degree);
  const auto w = rule.lebesgue_weights();
  const auto sums = parallel::project(modes, rule.nodes, w);
  std::vector<ModeResidual> out;
  out.reserve(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double exact = (modes[m] == MultiIndex{0, 0}) ? kTwoPi : 0.0;
    out.push_back({modes[m], std::abs(sums[m] - exact)});
  }
  return out;
}

double verify_exactness(const QuadratureRule &rule, int degree) {
  double worst = 0.0;
  for (const auto &r : exactness_residuals(rule, degree))
    worst = std::max(worst, r.residual);
  return worst;
}

namespace {

// Real orthonormal basis of Pi_n: the constant, then sqrt2 cos / sqrt2 sin for
// each k in the upper half plane, scaled by 1/(2 pi). `owner` maps rows to k.
Eigen::MatrixXd moment_matrix(std::span<const MultiIndex> modes,
                              std::span<const TorusPoint> points,
                              std::vector<MultiIndex> &owner) {
  owner.clear();
  for (auto k : modes) {
    if (k == MultiIndex{0, 0}) {
      owner.push_back(k);
    } else if (k.k1 > 0 || (k.k1 == 0 && k.k2 > 0)) {
      owner.push_back(k);
      owner.push_back(k);
    }
  }
  Eigen::MatrixXd a(owner.size(), points.size());
  const double amp = 1.0 / kTwoPi;
  const double amp2 = std::sqrt(2.0) / kTwoPi;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const auto x = points[std::size_t(i)];
    Eigen::Index row = 0;
    for (auto k : modes) {
      if (k == MultiIndex{0, 0}) {
        a(row++, i) = amp;
      } else if (k.k1 > 0 || (k.k1 == 0 && k.k2 > 0)) {
        const double phase = k.k1 * x.x1() + k.k2 * x.x2();
        a(row++, i) = amp2 * std::cos(phase);
        a(row++, i) = amp2 * std::sin(phase);
      }
    }
  }
  return a;
}

struct MinNormSolution {
  Eigen::VectorXd weights;
  int rank;
};

MinNormSolution min_norm_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &b,
                               const std::vector<MultiIndex> &owner, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  const int rank = int(svd.rank());
  if (rank < a.rows()) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
    qr.setThreshold(tol);
    std::vector<MultiIndex> deficient;
    const auto &perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < perm.size(); ++j) {
      const auto k = owner[std::size_t(perm(j))];
      if (std::find(deficient.begin(), deficient.end(), k) == deficient.end())
        deficient.push_back(k);
    }
    std::string msg = "solve_random_weights: moment matrix rank " + std::to_string(rank) +
                      " < " + std::to_string(a.rows()) + "; deficient modes:";
    for (auto k : deficient)
      msg += " (" + std::to_string(k.k1) + "," + std::to_string(k.k2) + ")";
    throw RankDeficientError(msg, std::move(deficient));
  }
  return {svd.solve(b), rank};
}

double probability_moment_residual(std::span<const MultiIndex> modes,
                                   std::span<const TorusPoint> points,
                                   std::span<const double> weights) {
  const auto sums = parallel::project(modes, points, weights);
  double worst = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double exact = (modes[m] == MultiIndex{0, 0}) ? 1.0 / kTwoPi : 0.0;
    worst = std::max(worst, std::abs(sums[m] - exact));
  }
  return worst;
}

} // namespace

QuadratureRule solve_random_weights(std::span<const TorusPoint> points, int degree, int servers,
                                    const SolveOptions &options) {
  if (degree < 0)
    throw PreconditionError("solve_random_weights: degree must be >= 0");
  if (servers < 1)
    throw PreconditionError("solve_random_weights: m must be >= 1");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) { return std::tuple(points[i].x1(), points[i].x2()); };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (points[order[i]] == points[order[i - 1]])
      throw PreconditionError("solve_random_weights: duplicate points");

  const auto modes = enumerate_modes(degree);
  if (points.size() < modes.size())
    throw PreconditionError("solve_random_weights: " + std::to_string(points.size()) +
                            " points cannot match " + std::to_string(modes.size()) + " moments");

  std::vector<MultiIndex> owner;
  const Eigen::MatrixXd a = moment_matrix(modes, points, owner);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
  b(0) = 1.0 / kTwoPi;

  auto sol = min_norm_solve(a, b, owner, options.rank_tolerance);
  std::vector<double> w(sol.weights.data(), sol.weights.data() + sol.weights.size());

  SolveReport report;
  report.rank = sol.rank;
  if (options.refine_nonnegative) {
    std::vector<bool> active(points.size(), true);
    for (std::size_t round = 0; round < points.size(); ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (active[i] && w[i] < 0.0) {
          active[i] = false;
          changed = true;
        }
      if (!changed)
        break;
      std::vector<Eigen::Index> cols;
      for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i])
          cols.push_back(Eigen::Index(i));
      if (cols.size() < std::size_t(a.rows()))
        break;
      Eigen::MatrixXd sub(a.rows(), Eigen::Index(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c)
        sub.col(Eigen::Index(c)) = a.col(cols[c]);
      MinNormSolution refined;
      try {
        refined = min_norm_solve(sub, b, owner, options.rank_tolerance);
      } catch (const RankDeficientError &) {
        break;
      }
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t c = 0; c < cols.size(); ++c)
        w[std::size_t(cols[c])] = refined.weights(Eigen::Index(c));
      report.refinement_rounds = int(round) + 1;
    }
  }

  QuadratureRule rule;
  rule.nodes.assign(points.begin(), points.end());
  rule.weights = std::move(w);
  rule.measure = MeasureConvention::normalized;
  rule.exactness_degree = degree;
  rule.provenance = SolvedProvenance{options.seed, degree, servers};

  report.sum_sq_raw = rule.sum_sq_weights();
  report.meets_two_over_n = report.sum_sq_raw <= 2.0 / double(points.size());
  report.moment_residual = probability_moment_residual(modes, rule.nodes, rule.weights);
  report.negative_weights =
      std::size_t(std::count_if(rule.weights.begin(), rule.weights.end(), [](double v) { return v < 0.0; }));
  rule.solve_report = report;
  return apply_weight_gate(std::move(rule), servers);
}

QuadratureRule apply_weight_gate(QuadratureRule rule, int servers) {
  if (servers < 1)
    throw PreconditionError("apply_weight_gate: m must be >= 1");
  if (!std::holds_alternative<SolvedProvenance>(rule.provenance))
    return rule;
  const double bound = 2.0 / servers;
  const bool pass = rule.sum_sq_weights() <= bound;
  if (rule.solve_report) {
    rule.solve_report->gate_bound = bound;
    rule.solve_report->gate_passed = pass && !rule.degenerate;
  }
  if (!pass) {
    std::fill(rule.weights.begin(), rule.weights.end(), 0.0);
    rule.degenerate = true;
    rule.exactness_degree.reset();
  }
  return rule;
}

std::string describe(const RuleProvenance &p) {
  char buf[128];
  if (const auto *g = std::get_if<GridProvenance>(&p)) {
    std::snprintf(buf, sizeof buf, "grid(n0=%d;shift=%.17g;%.17g)", g->n0, g->shift1, g->shift2);
  } else {
    const auto &s = std::get<SolvedProvenance>(p);
    if (s.seed)
      std::snprintf(buf, sizeof buf, "solved_random(seed=%llu;n=%d;m=%d)",
                    static_cast<unsigned long long>(*s.seed), s.degree, s.gate_servers);
    else
      std::snprintf(buf, sizeof buf, "solved_random(seed=none;n=%d;m=%d)", s.degree, s.gate_servers);
  }
  return buf;
}

} // namespace fhyper
