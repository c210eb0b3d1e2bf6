#include "doctest.h"

#include <sstream>

#include "fhyper/config.hpp"
#include "fhyper/error.hpp"
#include "fhyper/estimator.hpp"
#include "fhyper/io.hpp"
#include "support.hpp"

using namespace fhyper;
using fhyper::testing::Gen;

namespace {

template <class T, class W, class R>
T round_trip(const T &value, W write, R read) {
  std::stringstream s;
  write(s, value);
  return read(s);
}

} // namespace

TEST_CASE("rule round trip is bit exact in both float formats") {
  for (auto fmt : {FloatFormat::decimal17, FloatFormat::hex}) {
    const auto grid = grid_rule(2, 0.125, kPi / 7);
    const auto g = round_trip(grid, [&](std::ostream &o, const auto &r) { write_rule(o, r, fmt); },
                              [](std::istream &i) { return read_rule(i); });
    CHECK(g.nodes == grid.nodes);
    CHECK(g.weights == grid.weights);
    CHECK(g.exactness_degree == 5);
    CHECK(g.measure == MeasureConvention::lebesgue_2pi);
    const auto &gp = std::get<GridProvenance>(g.provenance);
    CHECK(gp.n0 == 2);
    CHECK(gp.shift1 == 0.125);
    CHECK(gp.shift2 == kPi / 7);

    const auto solved = solve_random_weights(uniform_points(100, 3), 2, 1, {.seed = 3});
    const auto s = round_trip(solved, [&](std::ostream &o, const auto &r) { write_rule(o, r, fmt); },
                              [](std::istream &i) { return read_rule(i); });
    CHECK(s.weights == solved.weights);
    CHECK(s.nodes == solved.nodes);
    CHECK(s.measure == MeasureConvention::normalized);
    CHECK(std::get<SolvedProvenance>(s.provenance).seed == 3u);
    CHECK(std::get<SolvedProvenance>(s.provenance).gate_servers == 1);
  }
}

TEST_CASE("degenerate rules serialize with degree -1") {
  const auto rule = solve_random_weights(uniform_points(100, 3), 2, 1000);
  std::stringstream s;
  write_rule(s, rule);
  CHECK(s.str().rfind("# torus-quadrature v1, N=100, degree=-1, provenance=solved_random(seed=none;n=2;m=1000)", 0) == 0);
  const auto back = read_rule(s);
  CHECK(back.degenerate);
  CHECK(!back.exactness_degree);
}

TEST_CASE("rule header layout") {
  std::stringstream s;
  write_rule(s, grid_rule(1));
  std::string first;
  std::getline(s, first);
  CHECK(first == "# torus-quadrature v1, N=9, degree=2, provenance=grid(n0=1;shift=0;0)");
  std::string row;
  std::getline(s, row);
  CHECK(row.rfind("0,0,", 0) == 0);
}

TEST_CASE("dataset round trip") {
  const auto d = make_dataset(TargetFunction::wendland_wu(), RandomSampling{50, 8}, NoiseModel::gaussian(0.1, 4));
  for (auto fmt : {FloatFormat::decimal17, FloatFormat::hex}) {
    std::stringstream s;
    write_dataset(s, d, fmt);
    CHECK(s.str().rfind("# torus-dataset v1, N=50, noise=gaussian:0.1, seed=4\n", 0) == 0);
    const auto back = read_dataset(s);
    CHECK(back.points == d.points);
    CHECK(back.values == d.values);
    CHECK(back.noise.level == 0.1);
    CHECK(back.noise.seed == 4);
  }
}

TEST_CASE("estimator round trip evaluates bitwise identically") {
  const auto target = TargetFunction::wendland_wu();
  const auto shifts = interleaved_shifts(4, 4);
  std::vector<QuadratureRule> rules;
  for (const auto &[a, b] : shifts)
    rules.push_back(grid_rule(4, a, b));
  const auto dfh = fit_dfh(shard_interleaved(target, 4, 4, shifts, NoiseModel::gaussian(0.1, 1)), 4, rules, 4);
  EstimatorFile file{4, 4, dfh.merged_expansion()};
  std::stringstream s;
  write_estimator(s, file);
  std::string header;
  std::getline(s, header);
  CHECK(header == "# torus-estimator v1, n=4, m=4");
  s.seekg(0);
  const auto back = read_estimator(s);
  CHECK(back.degree == 4);
  CHECK(back.servers == 4);
  REQUIRE(back.expansion.modes().size() == file.expansion.modes().size());
  const auto pts = uniform_points(200, 2);
  CHECK(back.expansion.evaluate(pts) == file.expansion.evaluate(pts));
}

TEST_CASE("malformed files are rejected with a line number") {
  std::stringstream a("# torus-quadrature v1, N=2, degree=1, provenance=grid(n0=1;shift=0;0)\n0,0,1\n0,x,1\n");
  try {
    read_rule(a);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
  std::stringstream b("# torus-dataset v1, N=3, noise=none, seed=0\n0,0,1\n");
  CHECK_THROWS_AS(read_dataset(b), ParseError);
  std::stringstream c("# something else\n");
  CHECK_THROWS_AS(read_estimator(c), ParseError);
  std::stringstream d("");
  CHECK_THROWS_AS(read_rule(d), ParseError);
  std::stringstream e("# torus-estimator v1, n=2, m=1\n0,0,1\n");
  CHECK_THROWS_AS(read_estimator(e), ParseError);
}

TEST_CASE("key-value config parsing") {
  const auto kv = KeyValueConfig::parse("# comment\n[sweep]\n  degrees = 2, 4 ; trailing\n\n[output]\npath=x.csv\n");
  const auto *d = kv.find("sweep", "degrees");
  REQUIRE(d);
  CHECK(d->value == "2, 4");
  CHECK(d->line == 3);
  CHECK(d->column == 13);
  CHECK(kv.find("output", "path")->value == "x.csv");
  CHECK(!kv.find("sweep", "path"));
}

TEST_CASE("config syntax errors carry line and column") {
  auto expect = [](const char *text, int line, int column) {
    try {
      parse_experiment_config(text);
      FAIL("expected a parse error for: " << text);
    } catch (const ParseError &e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos);
    }
  };
  expect("[sweep\ndegrees = 2\n", 1, 7);
  expect("[sweep]\ndegrees 2\n", 2, 1);
  expect("[sweep]\ndegrees = 2, x\n", 2, 14);
  expect("[sweep]\ndegrees = 2\nbogus = 1\n", 3, 1);
  expect("[sweep]\ndegrees = 2\n[target]\nkind = sphere\n", 4, 8);
  expect("[sweep]\ndegrees = 2\ndegrees = 3\n", 3, 1);
}

TEST_CASE("experiment config schema") {
  const auto cfg = parse_experiment_config(R"(
[target]
kind = mode
k = 2, -1

[sweep]
degrees = 2, 4, 8
noise = 0, 0.01
noise_kind = uniform
servers = 4
sampling = random
samples_per_server = 300
eval_grid = 64
trials = 3
seed = 42

[output]
path = out.csv
)");
  CHECK(cfg.target.describe() == TargetFunction::mode({2, -1}).describe());
  CHECK(cfg.degrees == std::vector<int>{2, 4, 8});
  CHECK(cfg.noise_levels == std::vector<double>{0.0, 0.01});
  CHECK(cfg.noise_kind == NoiseModel::Kind::bounded_uniform);
  CHECK(cfg.servers == 4);
  CHECK(cfg.sampling == SamplingKind::random);
  CHECK(cfg.samples_per_server == 300);
  CHECK(cfg.eval_resolution == 64);
  CHECK(cfg.trials == 3);
  CHECK(cfg.seed == 42u);
  CHECK(cfg.output_path == "out.csv");

  const auto minimal = parse_experiment_config("[sweep]\ndegrees = 3\n");
  CHECK(minimal.degrees == std::vector<int>{3});
  CHECK(minimal.noise_levels == std::vector<double>{0.0});
  CHECK(minimal.servers == 1);
  CHECK(!minimal.seed);
  CHECK_THROWS_AS(parse_experiment_config("[target]\nkind = wendland\n"), ParseError);
}
