#include "fhyper/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <ostream>

#include "fhyper/error.hpp"
#include "fhyper/rng.hpp"

namespace fhyper {

Evaluator evaluator_of(const NdfhEstimator &e) {
  auto held = std::make_shared<const NdfhEstimator>(e);
  return [held](std::span<const TorusPoint> xs) { return held->evaluate(xs); };
}

Evaluator evaluator_of(const DfhEstimator &e) {
  auto held = std::make_shared<const DfhEstimator>(e);
  return [held](std::span<const TorusPoint> xs) { return held->evaluate(xs); };
}

namespace {

double grid_sq_error(const Evaluator &estimate, const TargetFunction &target, int resolution) {
  const auto grid = reference_grid(resolution);
  std::vector<TorusPoint> pts(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    pts[j] = grid[j].point;
  const auto values = estimate(pts);
  std::vector<double> terms(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(grid.size()); ++j) {
    const double d = values[std::size_t(j)] - target(pts[std::size_t(j)]);
    terms[std::size_t(j)] = grid[std::size_t(j)].weight * d * d;
  }
  return parallel::pairwise_sum(terms);
}

} // namespace

L2Error l2_sq_error(const Evaluator &estimate, int degree, const TargetFunction &target,
                    int resolution, bool check_refinement) {
  if (degree < 1)
    throw PreconditionError("l2_sq_error: degree must be >= 1");
  if (resolution < 4 * degree)
    throw PreconditionError("l2_sq_error: resolution must be >= 4n");
  L2Error err;
  err.value = grid_sq_error(estimate, target, resolution);
  if (check_refinement) {
    err.refinement_checked = true;
    err.refined = grid_sq_error(estimate, target, 2 * resolution);
    const double scale = std::max(err.value, err.refined);
    err.relative_change = scale > 0.0 ? std::abs(err.refined - err.value) / scale : 0.0;
    // Values at rounding level carry no refinement information.
    err.converged = err.relative_change <= 0.10 || scale < 1e-24;
  }
  return err;
}

L2Error l2_sq_error(const NdfhEstimator &e, const TargetFunction &target, int resolution,
                    bool check_refinement) {
  return l2_sq_error(evaluator_of(e), e.degree(), target, resolution, check_refinement);
}

L2Error l2_sq_error(const DfhEstimator &e, const TargetFunction &target, int resolution,
                    bool check_refinement) {
  return l2_sq_error(evaluator_of(e), e.degree(), target, resolution, check_refinement);
}

double train_mse(const Evaluator &estimate, const Dataset &data) {
  if (data.size() == 0)
    throw PreconditionError("train_mse: empty dataset");
  const auto fitted = estimate(data.points);
  std::vector<double> sq(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = fitted[i] - data.values[i];
    sq[i] = d * d;
  }
  return parallel::pairwise_sum(sq) / double(data.size());
}

RateFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw PreconditionError("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  RateFit fit;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0) || !std::isfinite(ys[i]) || !(xs[i] > 0.0)) {
      ++fit.excluded;
      continue;
    }
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  std::vector<double> distinct(lx);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    throw PreconditionError("fit_loglog: need at least 3 usable points with distinct x");
  const double n = double(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.used = lx.size();
  return fit;
}

RateFit fit_rate(std::span<const ResultRow> rows, ErrorField field) {
  std::vector<double> xs, ys;
  for (const auto &r : rows) {
    if (r.skipped)
      continue;
    xs.push_back(double(r.N));
    ys.push_back(field == ErrorField::train_mse ? r.train_mse : r.gen_l2sq);
  }
  return fit_loglog(xs, ys);
}

int ExperimentConfig::resolved_eval_resolution() const {
  if (eval_resolution > 0)
    return eval_resolution;
  return degrees.empty() ? 0 : 8 * degrees.back();
}

void ExperimentConfig::validate() const {
  if (degrees.empty())
    throw PreconditionError("config: degree list is empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1)
      throw PreconditionError("config: degrees must be >= 1");
    if (i > 0 && degrees[i] <= degrees[i - 1])
      throw PreconditionError("config: degree list must be strictly increasing");
  }
  if (noise_levels.empty())
    throw PreconditionError("config: noise list is empty");
  bool noisy = false;
  for (double s : noise_levels) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw PreconditionError("config: noise levels must be finite and >= 0");
    noisy = noisy || s > 0.0;
  }
  if (trials < 1)
    throw PreconditionError("config: trials must be >= 1");
  if (servers < 1)
    throw PreconditionError("config: m must be >= 1");
  if (resolved_eval_resolution() < 4 * degrees.back())
    throw PreconditionError("config: evaluation grid must be >= 4 * max degree");
  if (sampling == SamplingKind::random && !seed)
    throw PreconditionError("config: random sampling requires a seed");
  if (noisy && !seed)
    throw PreconditionError("config: noisy runs require a seed");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t degree_index, std::size_t noise_index,
                         int trial) {
  return derive_seed(master, {degree_index, noise_index, std::uint64_t(trial)});
}

namespace {

struct Cell {
  std::size_t degree_index;
  std::size_t noise_index;
  int trial;
};

NoiseModel make_noise(const ExperimentConfig &cfg, double level, std::uint64_t seed) {
  if (level <= 0.0)
    return NoiseModel::none();
  if (cfg.noise_kind == NoiseModel::Kind::bounded_uniform)
    return NoiseModel::bounded_uniform(level, seed);
  return NoiseModel::gaussian(level, seed);
}

ResultRow run_cell(const ExperimentConfig &cfg, const Cell &cell, std::span<const TorusPoint> eval_pts,
                   const std::vector<WeightedPoint> &eval_grid) {
  const auto start = std::chrono::steady_clock::now();
  const int n = cfg.degrees[cell.degree_index];
  const int m = cfg.servers;
  const double level = cfg.noise_levels[cell.noise_index];
  ResultRow row;
  row.n = n;
  row.m = m;
  row.noise = level;
  row.seed = trial_seed(cfg.seed.value_or(0), cell.degree_index, cell.noise_index, cell.trial);
  const NoiseModel noise = make_noise(cfg, level, row.seed);

  Evaluator estimate;
  Dataset all;
  double imag = 0.0;
  try {
    if (cfg.sampling == SamplingKind::grid) {
      if (m == 1) {
        all = make_dataset(cfg.target, GridSampling{n}, noise);
        const auto est = fit_ndfh(all, n, grid_rule(n));
        imag = est.imaginary_residual(eval_pts);
        estimate = evaluator_of(est);
      } else {
        const auto shifts = interleaved_shifts(n, m);
        const auto shards = shard_interleaved(cfg.target, n, m, shifts, noise);
        std::vector<QuadratureRule> rules;
        for (const auto &[s1, s2] : shifts)
          rules.push_back(grid_rule(n, s1, s2));
        const auto est = fit_dfh(shards, n, rules, m);
        imag = est.imaginary_residual(eval_pts);
        estimate = evaluator_of(est);
        all = merge_shards(shards);
      }
    } else {
      const std::size_t per = cfg.samples_per_server ? cfg.samples_per_server : std::size_t(9) * n * n;
      const std::size_t mode_count = enumerate_modes(n).size();
      if (per < mode_count) {
        row.skipped = true;
        row.skip_reason = std::to_string(per) + " points per server below " +
                          std::to_string(mode_count) + " moments";
        row.N = per * std::size_t(m);
        return row;
      }
      all = make_dataset(cfg.target, RandomSampling{per * std::size_t(m), row.seed}, noise);
      const auto shards = split_round_robin(all, m);
      std::vector<QuadratureRule> rules;
      for (const auto &s : shards)
        rules.push_back(solve_random_weights(s.points, n, m, {.seed = row.seed}));
      const auto est = fit_dfh(shards, n, rules, m);
      imag = est.imaginary_residual(eval_pts);
      estimate = evaluator_of(est);
    }
  } catch (const NumericalError &e) {
    row.skipped = true;
    row.skip_reason = e.what();
    return row;
  }

  row.N = all.size();
  row.train_mse = train_mse(estimate, all);
  const auto fitted = estimate(eval_pts);
  std::vector<double> sq(eval_pts.size());
  for (std::size_t j = 0; j < eval_pts.size(); ++j) {
    const double d = fitted[j] - cfg.target(eval_pts[j]);
    sq[j] = eval_grid[j].weight * d * d;
  }
  row.gen_l2sq = parallel::pairwise_sum(sq);
  row.imag_resid = imag;
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

} // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig &cfg) {
  cfg.validate();
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < cfg.degrees.size(); ++d)
    for (std::size_t s = 0; s < cfg.noise_levels.size(); ++s) {
      const int trials = cfg.noise_levels[s] > 0.0 ? cfg.trials : 1;
      for (int t = 0; t < trials; ++t)
        cells.push_back({d, s, t});
    }
  const auto grid = reference_grid(cfg.resolved_eval_resolution());
  std::vector<TorusPoint> pts(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    pts[j] = grid[j].point;

  std::vector<ResultRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(cells.size()); ++c) {
    try {
      rows[std::size_t(c)] = run_cell(cfg, cells[std::size_t(c)], pts, grid);
    } catch (...) {
      errors[std::size_t(c)] = std::current_exception();
    }
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return rows;
}

std::optional<int> plateau_degree(std::span<const ResultRow> rows, double noise, ErrorField field) {
  std::map<int, std::pair<double, int>> by_degree;
  for (const auto &r : rows) {
    if (r.skipped || r.noise != noise)
      continue;
    auto &[sum, count] = by_degree[r.n];
    sum += field == ErrorField::train_mse ? r.train_mse : r.gen_l2sq;
    ++count;
  }
  std::optional<double> prev;
  for (const auto &[n, acc] : by_degree) {
    const double mean = acc.first / acc.second;
    if (prev && mean > 0.9 * *prev)
      return n;
    prev = mean;
  }
  return std::nullopt;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void write_sweep_csv(std::ostream &out, const ExperimentConfig &cfg, std::span<const ResultRow> rows) {
  out << "# torus-sweep v1\n";
  out << "# rng=" << Philox4x32::algorithm_id << "\n";
  out << "# target=" << cfg.target.describe() << "\n";
  out << "# degrees=";
  for (std::size_t i = 0; i < cfg.degrees.size(); ++i)
    out << (i ? ";" : "") << cfg.degrees[i];
  out << "\n# noise=";
  for (std::size_t i = 0; i < cfg.noise_levels.size(); ++i)
    out << (i ? ";" : "") << fmt_double(cfg.noise_levels[i]);
  out << "\n# noise_kind=" << (cfg.noise_kind == NoiseModel::Kind::bounded_uniform ? "uniform" : "gaussian");
  out << "\n# servers=" << cfg.servers;
  out << "\n# sampling=" << (cfg.sampling == SamplingKind::grid ? "grid" : "random");
  out << "\n# samples_per_server=" << cfg.samples_per_server;
  out << "\n# eval_grid=" << cfg.resolved_eval_resolution();
  out << "\n# trials=" << cfg.trials;
  out << "\n# seed=" << (cfg.seed ? std::to_string(*cfg.seed) : std::string("none")) << "\n";
  out << kCsvHeader << "\n";
  for (const auto &r : rows) {
    if (r.skipped) {
      out << "# skipped n=" << r.n << " noise=" << fmt_double(r.noise) << " seed=" << r.seed
          << ": " << r.skip_reason << "\n";
      continue;
    }
    out << r.n << ',' << r.N << ',' << r.m << ',' << fmt_double(r.noise) << ',' << r.seed << ','
        << fmt_double(r.train_mse) << ',' << fmt_double(r.gen_l2sq) << ','
        << fmt_double(r.imag_resid) << ',' << fmt_double(r.wall_ms) << '\n';
  }
}

void write_plot_stub(std::ostream &out, const std::string &csv_path) {
  out << "# Plot train / generalization error against N from a torus-sweep CSV.\n"
         "import csv, collections\n"
         "import matplotlib.pyplot as plt\n\n"
         "rows = [r for r in csv.DictReader(l for l in open(" << '"' << csv_path << '"'
      << ") if not l.startswith('#'))]\n"
         "by_noise = collections.defaultdict(list)\n"
         "for r in rows:\n"
         "    by_noise[float(r['noise'])].append(r)\n"
         "for noise, rs in sorted(by_noise.items()):\n"
         "    agg = collections.defaultdict(list)\n"
         "    for r in rs:\n"
         "        agg[int(r['N'])].append((float(r['train_mse']), float(r['gen_l2sq'])))\n"
         "    ns = sorted(agg)\n"
         "    tr = [sum(a for a, _ in agg[n]) / len(agg[n]) for n in ns]\n"
         "    ge = [sum(b for _, b in agg[n]) / len(agg[n]) for n in ns]\n"
         "    line, = plt.loglog(ns, ge, '-', label=f'noise={noise} general')\n"
         "    plt.loglog(ns, tr, ':', color=line.get_color(), label=f'noise={noise} train')\n"
         "plt.xlabel('N'); plt.ylabel('L2 squared error'); plt.legend(); plt.show()\n";
}

} // namespace fhyper
