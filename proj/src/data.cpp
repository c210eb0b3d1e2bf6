#include "fhyper/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fhyper/error.hpp"
#include "fhyper/quadrature.hpp"
#include "fhyper/rng.hpp"

namespace fhyper {

double wendland_wu_profile(double u) {
  const double a = std::max(1.0 - u, 0.0);
  const double a2 = a * a;
  const double a4 = a2 * a2;
  return a4 * a4 * (((32.0 * u + 25.0) * u + 8.0) * u + 1.0);
}

double wendland_wu_eval(TorusPoint center, TorusPoint x) {
  return wendland_wu_profile(geodesic_distance(x, center));
}

TargetFunction TargetFunction::wendland_wu(TorusPoint center) {
  return TargetFunction(WendlandWu{center});
}

TargetFunction TargetFunction::mode(MultiIndex k) { return TargetFunction(Mode{k}); }

TargetFunction TargetFunction::custom(TorusFunction f, double smoothness, std::string name) {
  return TargetFunction(Custom{std::move(f), smoothness, std::move(name)});
}

double TargetFunction::operator()(TorusPoint x) const {
  if (const auto *w = std::get_if<WendlandWu>(&kind_))
    return wendland_wu_eval(w->center, x);
  if (const auto *m = std::get_if<Mode>(&kind_))
    return eigenfunction_eval(m->k, x).real();
  return std::get<Custom>(kind_).f(x);
}

double TargetFunction::smoothness() const {
  if (std::holds_alternative<WendlandWu>(kind_))
    return 6.0;
  if (std::holds_alternative<Mode>(kind_))
    return std::numeric_limits<double>::infinity();
  return std::get<Custom>(kind_).smoothness;
}

std::string TargetFunction::describe() const {
  char buf[96];
  if (const auto *w = std::get_if<WendlandWu>(&kind_)) {
    std::snprintf(buf, sizeof buf, "wendland(%.17g;%.17g)", w->center.x1(), w->center.x2());
    return buf;
  }
  if (const auto *m = std::get_if<Mode>(&kind_)) {
    std::snprintf(buf, sizeof buf, "mode(%d;%d)", m->k.k1, m->k.k2);
    return buf;
  }
  return std::get<Custom>(kind_).name;
}

TorusFunction TargetFunction::as_function() const {
  return [self = *this](TorusPoint x) { return self(x); };
}

NoiseModel NoiseModel::bounded_uniform(double bound, std::uint64_t seed) {
  if (!(bound >= 0.0))
    throw PreconditionError("NoiseModel: bound must be >= 0");
  return {Kind::bounded_uniform, bound, seed};
}

NoiseModel NoiseModel::gaussian(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0))
    throw PreconditionError("NoiseModel: sigma must be >= 0");
  return {Kind::gaussian, sigma, seed};
}

std::string NoiseModel::descriptor() const {
  // shortest text that parses back to the same double
  char buf[32];
  const auto level_text = [&] {
    const auto r = std::to_chars(buf, buf + sizeof buf, level);
    return std::string(buf, r.ptr);
  };
  switch (kind) {
  case Kind::none:
    return "none";
  case Kind::bounded_uniform:
    return "uniform:" + level_text();
  case Kind::gaussian:
    return "gaussian:" + level_text();
  }
  return "none";
}

NoiseModel NoiseModel::parse(const std::string &text, std::uint64_t seed) {
  if (text == "none")
    return none();
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("noise descriptor '" + text + "': expected none, uniform:<M> or gaussian:<sigma>");
  const std::string kind = text.substr(0, colon);
  double level = 0.0;
  try {
    std::size_t used = 0;
    level = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1)
      throw std::invalid_argument("trailing");
  } catch (const std::exception &) {
    throw ParseError("noise descriptor '" + text + "': bad level");
  }
  if (!(level >= 0.0))
    throw ParseError("noise descriptor '" + text + "': level must be >= 0");
  if (kind == "uniform")
    return bounded_uniform(level, seed);
  if (kind == "gaussian")
    return gaussian(level, seed);
  throw ParseError("noise descriptor '" + text + "': unknown kind '" + kind + "'");
}

std::vector<TorusPoint> uniform_points(std::size_t count, std::uint64_t seed) {
  CounterStream rng(seed, 0);
  std::vector<TorusPoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = rng.uniform(-kPi, kPi);
    const double b = rng.uniform(-kPi, kPi);
    pts.emplace_back(a, b);
  }
  return pts;
}

namespace {

void add_noise(std::vector<double> &values, const NoiseModel &noise) {
  if (noise.kind == NoiseModel::Kind::none)
    return;
  CounterStream rng(noise.seed, 1);
  for (double &v : values) {
    if (noise.kind == NoiseModel::Kind::bounded_uniform)
      v += rng.uniform(-noise.level, noise.level);
    else
      v += noise.level * rng.gaussian();
  }
}

} // namespace

Dataset make_dataset(const TargetFunction &target, const Sampling &sampling,
                     const NoiseModel &noise) {
  Dataset d;
  if (const auto *g = std::get_if<GridSampling>(&sampling)) {
    d.points = grid_nodes(g->n0, g->shift1, g->shift2);
  } else {
    const auto &r = std::get<RandomSampling>(sampling);
    if (r.count < 1)
      throw PreconditionError("make_dataset: sample count must be >= 1");
    d.points = uniform_points(r.count, r.seed);
  }
  d.values.resize(d.points.size());
  for (std::size_t i = 0; i < d.points.size(); ++i)
    d.values[i] = target(d.points[i]);
  add_noise(d.values, noise);
  d.noise = noise;
  d.target = target;
  d.sampling = sampling;
  return d;
}

std::vector<std::pair<double, double>> interleaved_shifts(int n0, int servers) {
  if (n0 < 1 || servers < 1)
    throw PreconditionError("interleaved_shifts: n0 and m must be >= 1");
  const int q = int(std::ceil(std::sqrt(double(servers)) - 1e-12));
  const double h = kTwoPi / (3.0 * n0);
  std::vector<std::pair<double, double>> shifts;
  for (int j = 0; j < servers; ++j)
    shifts.emplace_back((j % q) * h / q, (j / q) * h / q);
  return shifts;
}

std::vector<Dataset> shard_interleaved(const TargetFunction &target, int n0, int servers,
                                       const std::vector<std::pair<double, double>> &shifts,
                                       const NoiseModel &noise) {
  if (n0 < 1 || servers < 1)
    throw PreconditionError("shard_interleaved: n0 and m must be >= 1");
  if (shifts.size() != std::size_t(servers))
    throw PreconditionError("shard_interleaved: need exactly m shifts");
  const double h = kTwoPi / (3.0 * n0);
  for (const auto &[s1, s2] : shifts)
    if (!(s1 >= 0.0 && s1 < kTwoPi && s2 >= 0.0 && s2 < kTwoPi))
      throw PreconditionError("shard_interleaved: shifts must lie in [0, 2 pi)");
  // Two shifted copies of the same lattice share nodes iff the shifts differ by
  // a lattice vector.
  auto on_lattice = [h](double d) {
    const double r = d / h;
    return std::abs(r - std::round(r)) < 1e-9;
  };
  for (std::size_t a = 0; a < shifts.size(); ++a)
    for (std::size_t b = a + 1; b < shifts.size(); ++b)
      if (on_lattice(shifts[a].first - shifts[b].first) &&
          on_lattice(shifts[a].second - shifts[b].second))
        throw PreconditionError("shard_interleaved: shifts " + std::to_string(a) + " and " +
                                std::to_string(b) + " produce overlapping shards");

  std::vector<Dataset> shards;
  for (int j = 0; j < servers; ++j) {
    NoiseModel shard_noise = noise;
    shard_noise.seed = derive_seed(noise.seed, {std::uint64_t(j)});
    shards.push_back(make_dataset(
        target, GridSampling{n0, shifts[std::size_t(j)].first, shifts[std::size_t(j)].second},
        shard_noise));
  }
  return shards;
}

std::vector<Dataset> split_round_robin(const Dataset &data, int servers) {
  if (servers < 1)
    throw PreconditionError("split_round_robin: m must be >= 1");
  if (std::size_t(servers) > data.size())
    throw PreconditionError("split_round_robin: more servers than samples");
  std::vector<Dataset> shards(static_cast<std::size_t>(servers));
  for (auto &s : shards) {
    s.noise = data.noise;
    s.target = data.target;
    s.sampling = data.sampling;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto &s = shards[i % std::size_t(servers)];
    s.points.push_back(data.points[i]);
    s.values.push_back(data.values[i]);
  }
  return shards;
}

Dataset merge_shards(const std::vector<Dataset> &shards) {
  Dataset d;
  if (shards.empty())
    return d;
  d.noise = shards.front().noise;
  d.target = shards.front().target;
  d.sampling = shards.front().sampling;
  for (const auto &s : shards) {
    d.points.insert(d.points.end(), s.points.begin(), s.points.end());
    d.values.insert(d.values.end(), s.values.begin(), s.values.end());
  }
  return d;
}

} // namespace fhyper
