#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "fhyper/config.hpp"
#include "fhyper/data.hpp"
#include "fhyper/estimator.hpp"
#include "fhyper/experiments.hpp"
#include "fhyper/filter.hpp"
#include "fhyper/io.hpp"
#include "fhyper/quadrature.hpp"

namespace fhyper::cli {

namespace {

/// Raised for invalid flag combinations; reported as exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string default_output(const std::string &name) {
  if (const char *dir = std::getenv("FHYPER_OUTPUT_DIR"); dir && *dir)
    return std::string(dir) + "/" + name;
  return name;
}

TargetFunction parse_target(const std::string &spec) {
  auto numbers = [&](const std::string &body) {
    std::vector<double> v;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      char *end = nullptr;
      v.push_back(std::strtod(item.c_str(), &end));
      if (end == item.c_str() || *end != '\0')
        throw UsageError("bad target '" + spec + "'");
    }
    return v;
  };
  if (spec == "wendland")
    return TargetFunction::wendland_wu();
  if (spec.rfind("wendland:", 0) == 0) {
    auto c = numbers(spec.substr(9));
    if (c.size() != 2)
      throw UsageError("wendland centre needs two coordinates");
    return TargetFunction::wendland_wu({c[0], c[1]});
  }
  if (spec.rfind("mode:", 0) == 0) {
    auto k = numbers(spec.substr(5));
    if (k.size() != 2 || k[0] != int(k[0]) || k[1] != int(k[1]))
      throw UsageError("mode target needs two integers, e.g. mode:1,0");
    return TargetFunction::mode({int(k[0]), int(k[1])});
  }
  throw UsageError("unknown target '" + spec + "' (wendland, wendland:x1,x2, mode:k1,k2)");
}

template <class Write>
void write_file(const std::string &path, Write write) {
  std::ofstream f(path);
  if (!f)
    throw UsageError("cannot write '" + path + "'");
  write(f);
}

template <class Read>
auto read_file(const std::string &path, Read read) {
  std::ifstream f(path);
  if (!f)
    throw UsageError("cannot read '" + path + "'");
  return read(f);
}

struct FitOptions {
  std::string target = "wendland";
  int degree = 0;
  int servers = 1;
  bool grid = false;
  std::size_t random = 0;
  std::string dataset;
  std::string rule;
  std::string noise = "none";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string dataset_out;
};

int cmd_fit(const FitOptions &o, std::ostream &out) {
  if (o.servers < 1)
    throw UsageError("m must be >= 1");
  if (o.degree < 1)
    throw UsageError("n must be >= 1");
  const int sources = int(o.grid) + int(o.random > 0) + int(!o.dataset.empty());
  if (sources > 1)
    throw UsageError("choose one of --grid, --random, --dataset");
  const bool use_random = o.random > 0;
  const bool use_dataset = !o.dataset.empty();
  const NoiseModel noise = NoiseModel::parse(o.noise, o.seed.value_or(0));
  if ((noise.is_noisy() || use_random) && !o.seed)
    throw UsageError("--seed is required for noisy or random data");
  if (!o.rule.empty() && !use_dataset)
    throw UsageError("--rule only applies with --dataset");
  if (!o.rule.empty() && o.servers != 1)
    throw UsageError("--rule only applies with --servers 1");

  const std::string out_path = o.out.empty() ? default_output("estimator.txt") : o.out;
  out << "# fit target=" << o.target << " n=" << o.degree << " servers=" << o.servers
      << " sampling=" << (use_dataset ? "dataset:" + o.dataset : use_random ? "random:" + std::to_string(o.random) : "grid")
      << " rule=" << (o.rule.empty() ? "auto" : o.rule) << " noise=" << noise.descriptor()
      << " seed=" << (o.seed ? std::to_string(*o.seed) : "none") << " out=" << out_path << '\n';

  std::vector<Dataset> shards;
  std::vector<QuadratureRule> rules;
  if (use_dataset || use_random) {
    Dataset all = use_dataset ? read_file(o.dataset, [](std::istream &in) { return read_dataset(in); })
                              : make_dataset(parse_target(o.target),
                                             RandomSampling{o.random * std::size_t(o.servers), *o.seed}, noise);
    if (!o.rule.empty()) {
      rules.push_back(read_file(o.rule, [](std::istream &in) { return read_rule(in); }));
      shards.push_back(std::move(all));
    } else {
      shards = split_round_robin(all, o.servers);
      for (const auto &s : shards)
        rules.push_back(solve_random_weights(s.points, o.degree, o.servers, {.seed = o.seed}));
    }
  } else {
    const auto target = parse_target(o.target);
    const auto shifts = interleaved_shifts(o.degree, o.servers);
    shards = shard_interleaved(target, o.degree, o.servers, shifts, noise);
    for (const auto &[s1, s2] : shifts)
      rules.push_back(grid_rule(o.degree, s1, s2));
  }
  if (!o.dataset_out.empty())
    write_file(o.dataset_out, [&](std::ostream &f) { write_dataset(f, merge_shards(shards)); });

  EstimatorFile file;
  file.degree = o.degree;
  file.servers = o.servers;
  std::size_t degenerate = 0;
  if (o.servers == 1 && !o.rule.empty()) {
    const auto est = fit_ndfh(shards.front(), o.degree, rules.front());
    file.expansion = est.expansion();
    degenerate = est.degenerate();
  } else {
    const auto est = fit_dfh(shards, o.degree, rules, o.servers);
    file.expansion = o.servers == 1 ? est.shards().front().expansion() : est.merged_expansion();
    degenerate = est.degenerate_shards().size();
  }
  write_file(out_path, [&](std::ostream &f) { write_estimator(f, file); });
  out << "modes=" << file.expansion.modes().size() << " degenerate_shards=" << degenerate
      << " wrote=" << out_path << '\n';
  return kSuccess;
}

struct EvalOptions {
  std::string estimator;
  std::string points;
  std::size_t random = 0;
  int grid = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_eval(const EvalOptions &o, std::ostream &out) {
  const int sources = int(!o.points.empty()) + int(o.random > 0) + int(o.grid > 0);
  if (sources != 1)
    throw UsageError("choose exactly one of --points, --random, --grid");
  if (o.random > 0 && !o.seed)
    throw UsageError("--seed is required with --random");
  const auto est = read_file(o.estimator, [](std::istream &in) { return read_estimator(in); });

  std::vector<TorusPoint> pts;
  if (!o.points.empty()) {
    pts = read_file(o.points, [](std::istream &in) {
      std::vector<TorusPoint> v;
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#')
          continue;
        double a = 0.0, b = 0.0;
        char comma = 0;
        std::istringstream ss(line);
        if (!(ss >> a >> comma >> b) || comma != ',')
          throw ParseError("line " + std::to_string(line_no) + ": expected x1,x2", line_no);
        v.emplace_back(a, b);
      }
      return v;
    });
  } else if (o.random > 0) {
    pts = uniform_points(o.random, *o.seed);
  } else {
    for (const auto &g : reference_grid(o.grid))
      pts.push_back(g.point);
  }
  const auto values = est.expansion.evaluate(pts);

  auto emit = [&](std::ostream &f) {
    f << "# eval estimator=" << o.estimator << " n=" << est.degree << " m=" << est.servers
      << " points=" << pts.size() << '\n';
    f << "x1,x2,value\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
      f << num(pts[i].x1()) << ',' << num(pts[i].x2()) << ',' << num(values[i]) << '\n';
  };
  if (o.out.empty()) {
    emit(out);
  } else {
    out << "# eval estimator=" << o.estimator << " out=" << o.out << '\n';
    write_file(o.out, emit);
  }
  return kSuccess;
}

struct VerifyOptions {
  int grid = 0;
  std::string rule;
  int degree = -1;
  double threshold = 1e-10;
};

int cmd_verify(const VerifyOptions &o, std::ostream &out) {
  if ((o.grid > 0) == !o.rule.empty())
    throw UsageError("choose exactly one of --grid, --rule");
  if (o.degree < 0)
    throw UsageError("degree must be >= 0");
  const auto rule = o.grid > 0 ? grid_rule(o.grid)
                               : read_file(o.rule, [](std::istream &in) { return read_rule(in); });
  out << "# verify-quadrature rule=" << (o.grid > 0 ? "grid:" + std::to_string(o.grid) : o.rule)
      << " degree=" << o.degree << " threshold=" << num(o.threshold) << '\n';
  const auto residuals = exactness_residuals(rule, o.degree);
  double worst = 0.0;
  for (const auto &r : residuals)
    worst = std::max(worst, r.residual);
  out << "max_residual=" << num(worst) << '\n';
  const bool pass = worst < o.threshold;
  if (!pass)
    for (const auto &r : residuals)
      if (r.residual >= o.threshold)
        out << "aliased k=" << r.k.k1 << ',' << r.k.k2 << " residual=" << num(r.residual) << '\n';
  out << "result=" << (pass ? "pass" : "fail") << '\n';
  return pass ? kSuccess : kVerificationFailed;
}

struct SweepOptions {
  std::string config;
  bool strict = false;
  std::string out;
  bool plot_stub = false;
};

int cmd_sweep(const SweepOptions &o, std::ostream &out) {
  std::ifstream in(o.config);
  if (!in)
    throw UsageError("cannot read '" + o.config + "'");
  std::stringstream text;
  text << in.rdbuf();
  auto cfg = parse_experiment_config(text.str());
  if (!o.out.empty())
    cfg.output_path = o.out;
  if (cfg.output_path.empty())
    cfg.output_path = default_output("sweep.csv");
  cfg.validate();
  out << "# sweep config=" << o.config << " out=" << cfg.output_path
      << " strict=" << (o.strict ? "yes" : "no") << '\n';

  const auto rows = run_sweep(cfg);
  write_file(cfg.output_path, [&](std::ostream &f) { write_sweep_csv(f, cfg, rows); });
  if (o.plot_stub)
    write_file(cfg.output_path + ".plot.py", [&](std::ostream &f) { write_plot_stub(f, cfg.output_path); });

  std::size_t skipped = 0;
  for (const auto &r : rows)
    skipped += r.skipped;
  out << "rows=" << rows.size() - skipped << " skipped=" << skipped << " wrote=" << cfg.output_path << '\n';
  if (cfg.noise_levels.size() && cfg.degrees.size() >= 3) {
    std::vector<ResultRow> clean;
    for (const auto &r : rows)
      if (r.noise == 0.0 && !r.skipped)
        clean.push_back(r);
    if (clean.size() >= 3) {
      const auto fit = fit_rate(clean, ErrorField::gen_l2sq);
      out << "noiseless_gen_slope=" << num(fit.slope) << '\n';
    }
  }
  for (double s : cfg.noise_levels)
    if (s > 0.0)
      if (auto p = plateau_degree(rows, s, ErrorField::gen_l2sq))
        out << "plateau noise=" << num(s) << " n=" << *p << '\n';
  if (o.strict && skipped > 0) {
    out << "error: " << skipped << " skipped cells in strict mode\n";
    return kStrictSkip;
  }
  return kSuccess;
}

int cmd_filter_report(int max_order, double step, std::ostream &out) {
  out << "# filter-report max_order=" << max_order << " step=" << num(step) << '\n';
  out << "order,gap_at_1,gap_at_2\n";
  for (const auto &g : boundary_smoothness_report(Filter::standard(), max_order, step))
    out << g.order << ',' << num(g.gap_at_one) << ',' << num(g.gap_at_two) << '\n';
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Filtered hyperinterpolation on the 2-torus"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Cap on OpenMP worker threads (results do not change)");

  FitOptions fit;
  auto *fit_cmd = app.add_subcommand("fit", "Fit an NDFH/DFH estimator and write it to a file");
  fit_cmd->add_option("--target", fit.target, "wendland | wendland:x1,x2 | mode:k1,k2");
  fit_cmd->add_option("--n", fit.degree, "Degree n")->required();
  fit_cmd->add_option("--servers", fit.servers, "Server count m");
  fit_cmd->add_flag("--grid", fit.grid, "Equispaced grid data with n0 = n (default)");
  fit_cmd->add_option("--random", fit.random, "Uniform random points per server");
  fit_cmd->add_option("--dataset", fit.dataset, "Read data from a torus-dataset file");
  fit_cmd->add_option("--rule", fit.rule, "Quadrature rule file for --dataset");
  fit_cmd->add_option("--noise", fit.noise, "none | uniform:<M> | gaussian:<sigma>");
  fit_cmd->add_option("--seed", fit.seed, "Seed for sampling and noise");
  fit_cmd->add_option("--out", fit.out, "Estimator output path");
  fit_cmd->add_option("--dataset-out", fit.dataset_out, "Also write the generated data");

  EvalOptions ev;
  auto *eval_cmd = app.add_subcommand("eval", "Evaluate a saved estimator");
  eval_cmd->add_option("--estimator", ev.estimator, "torus-estimator file")->required();
  eval_cmd->add_option("--points", ev.points, "File of x1,x2 rows");
  eval_cmd->add_option("--random", ev.random, "Number of uniform random points");
  eval_cmd->add_option("--grid", ev.grid, "Reference grid resolution G");
  eval_cmd->add_option("--seed", ev.seed, "Seed for --random");
  eval_cmd->add_option("--out", ev.out, "Output path (default stdout)");

  VerifyOptions ver;
  auto *ver_cmd = app.add_subcommand("verify-quadrature", "Check the exactness of a quadrature rule");
  ver_cmd->add_option("--grid", ver.grid, "Equispaced rule with parameter n0");
  ver_cmd->add_option("--rule", ver.rule, "torus-quadrature file");
  ver_cmd->add_option("--degree", ver.degree, "Degree to verify")->required();
  ver_cmd->add_option("--threshold", ver.threshold, "Pass threshold on the max residual");

  SweepOptions sw;
  auto *sweep_cmd = app.add_subcommand("sweep", "Run a convergence sweep from a config file");
  sweep_cmd->add_option("--config", sw.config, "Sweep config file")->required();
  sweep_cmd->add_flag("--strict", sw.strict, "Exit 3 if any cell was skipped");
  sweep_cmd->add_option("--out", sw.out, "CSV path (overrides [output] path)");
  sweep_cmd->add_flag("--plot-stub", sw.plot_stub, "Also write <csv>.plot.py");

  int max_order = 6;
  double step = 1e-3;
  auto *rep_cmd = app.add_subcommand("filter-report", "Derivative gaps of the filter at t = 1 and t = 2");
  rep_cmd->add_option("--max-order", max_order, "Highest derivative order (<= 6)");
  rep_cmd->add_option("--step", step, "Finite-difference step");

  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  if (threads > 0)
    omp_set_num_threads(threads);

  try {
    if (fit_cmd->parsed())
      return cmd_fit(fit, out);
    if (eval_cmd->parsed())
      return cmd_eval(ev, out);
    if (ver_cmd->parsed())
      return cmd_verify(ver, out);
    if (sweep_cmd->parsed())
      return cmd_sweep(sw, out);
    return cmd_filter_report(max_order, step, out);
  } catch (const ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PreconditionError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

} // namespace fhyper::cli
