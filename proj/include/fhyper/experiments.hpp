#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhyper/data.hpp"
#include "fhyper/estimator.hpp"

namespace fhyper {

using Evaluator = std::function<std::vector<double>(std::span<const TorusPoint>)>;

Evaluator evaluator_of(const NdfhEstimator &e);
Evaluator evaluator_of(const DfhEstimator &e);

struct L2Error {
  double value = 0.0;           // on reference_grid(G)
  double refined = 0.0;         // on reference_grid(2G), when checked
  double relative_change = 0.0;
  bool refinement_checked = false;
  /// False when doubling G moved the value by more than 10%.
  bool converged = true;
};

/// sum_j w_j (E(x_j) - f*(x_j))^2 on reference_grid(G), Lebesgue weights.
/// Requires G >= 4n. With check_refinement the value is recomputed at 2G.
L2Error l2_sq_error(const Evaluator &estimate, int degree, const TargetFunction &target,
                    int resolution, bool check_refinement = true);
L2Error l2_sq_error(const NdfhEstimator &e, const TargetFunction &target, int resolution,
                    bool check_refinement = true);
L2Error l2_sq_error(const DfhEstimator &e, const TargetFunction &target, int resolution,
                    bool check_refinement = true);

/// (1/N) sum_i (E(x_i) - y_i)^2.
double train_mse(const Evaluator &estimate, const Dataset &data);

struct ResultRow {
  int n = 0;
  std::size_t N = 0;
  int m = 1;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double train_mse = 0.0;
  double gen_l2sq = 0.0;
  double imag_resid = 0.0;
  double wall_ms = 0.0;
  bool skipped = false;
  std::string skip_reason;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0; // rows with non-positive or non-finite error
};

/// Least-squares line through (log x, log y). Needs >= 3 usable points with
/// distinct x; throws PreconditionError otherwise.
RateFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

enum class ErrorField { train_mse, gen_l2sq };

/// Slope of log(error) against log(N) over the non-skipped rows.
RateFit fit_rate(std::span<const ResultRow> rows, ErrorField field);

enum class SamplingKind { grid, random };

struct ExperimentConfig {
  TargetFunction target = TargetFunction::wendland_wu();
  std::vector<int> degrees;
  std::vector<double> noise_levels{0.0};
  NoiseModel::Kind noise_kind = NoiseModel::Kind::gaussian;
  int servers = 1;
  SamplingKind sampling = SamplingKind::grid;
  /// Random sampling only: points per server, 0 meaning 9 n^2.
  std::size_t samples_per_server = 0;
  /// Evaluation grid; 0 means 8 * max degree.
  int eval_resolution = 0;
  int trials = 5; // noisy cells; noiseless cells always run once
  std::optional<std::uint64_t> seed;
  std::string output_path;

  int resolved_eval_resolution() const;
  /// Throws PreconditionError on the first violated invariant.
  void validate() const;
};

/// One row per (degree, noise, trial) in that order; deterministic given the
/// config except for wall_ms.
std::vector<ResultRow> run_sweep(const ExperimentConfig &cfg);

/// Per-trial seed: derive_seed(master, {degree index, noise index, trial}).
std::uint64_t trial_seed(std::uint64_t master, std::size_t degree_index,
                         std::size_t noise_index, int trial);

/// Smallest degree whose mean error exceeds 0.9 x the previous degree's mean,
/// among rows with the given noise level.
std::optional<int> plateau_degree(std::span<const ResultRow> rows, double noise, ErrorField field);

inline constexpr const char *kCsvHeader = "n,N,m,noise,seed,train_mse,gen_l2sq,imag_resid,wall_ms";

void write_sweep_csv(std::ostream &out, const ExperimentConfig &cfg,
                     std::span<const ResultRow> rows);

/// Small matplotlib script that reads the CSV and draws both error curves.
void write_plot_stub(std::ostream &out, const std::string &csv_path);

} // namespace fhyper
