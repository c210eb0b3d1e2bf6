#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fhyper/error.hpp"
#include "fhyper/manifold.hpp"

namespace fhyper {

struct GridProvenance {
  int n0;
  double shift1 = 0.0;
  double shift2 = 0.0;
};

struct SolvedProvenance {
  std::optional<std::uint64_t> seed; // seed of the sample, when known
  int degree;
  int gate_servers;
};

using RuleProvenance = std::variant<GridProvenance, SolvedProvenance>;

/// Diagnostics recorded by solve_random_weights.
struct SolveReport {
  double sum_sq_raw = 0.0;        // sum of squared weights before the gate
  double gate_bound = 0.0;        // 2 / m
  bool gate_passed = false;
  bool meets_two_over_n = false;  // sum_sq_raw <= 2 / N
  double moment_residual = 0.0;   // before the gate
  std::size_t negative_weights = 0;
  int rank = 0;
  int refinement_rounds = 0;
};

/// Weighted node set. Grid rules carry Lebesgue weights (total (2 pi)^2);
/// solved rules carry probability weights for the uniform measure (total 1).
struct QuadratureRule {
  std::vector<TorusPoint> nodes;
  std::vector<double> weights;
  std::optional<int> exactness_degree; // empty when the gate zeroed the rule
  MeasureConvention measure = MeasureConvention::lebesgue_2pi;
  RuleProvenance provenance;
  bool degenerate = false;
  std::optional<SolveReport> solve_report;

  std::size_t size() const { return nodes.size(); }
  /// Weights rescaled to Lebesgue measure on [-pi, pi)^2.
  std::vector<double> lebesgue_weights() const;
  double sum_sq_weights() const;
};

/// Nodes (2 pi j / (3 n0) + s1, 2 pi l / (3 n0) + s2), reduced, j-major over
/// j, l in 0..3 n0 - 1.
std::vector<TorusPoint> grid_nodes(int n0, double shift1 = 0.0, double shift2 = 0.0);

/// Equal-weight rule on grid_nodes(n0): N = 9 n0^2, weights (2 pi)^2 / N,
/// exact for |k| <= 3 n0 - 1.
QuadratureRule grid_rule(int n0, double shift1 = 0.0, double shift2 = 0.0);

struct ModeResidual {
  MultiIndex k;
  double residual;
};

/// |sum_i w_i phi_k(x_i) - int phi_k| for every |k| <= degree, in Lebesgue units.
std::vector<ModeResidual> exactness_residuals(const QuadratureRule &rule, int degree);

/// Largest entry of exactness_residuals().
double verify_exactness(const QuadratureRule &rule, int degree);

class RankDeficientError : public NumericalError {
public:
  RankDeficientError(const std::string &what, std::vector<MultiIndex> modes)
      : NumericalError(what), modes_(std::move(modes)) {}
  const std::vector<MultiIndex> &deficient_modes() const { return modes_; }

private:
  std::vector<MultiIndex> modes_;
};

struct SolveOptions {
  std::optional<std::uint64_t> seed;
  /// Repeatedly drop nodes with negative weight and re-solve on the rest.
  bool refine_nonnegative = false;
  double rank_tolerance = 1e-12;
};

/// Minimal-norm real weights matching the uniform-probability moments of
/// every mode |k| <= degree, followed by the 2/m weight gate.
QuadratureRule solve_random_weights(std::span<const TorusPoint> points, int degree, int servers,
                                    const SolveOptions &options = {});

/// Zero all weights of a solved rule whose squared norm exceeds 2 / servers.
/// Grid rules pass through unchanged. Idempotent.
QuadratureRule apply_weight_gate(QuadratureRule rule, int servers);

std::string describe(const RuleProvenance &p);

} // namespace fhyper
