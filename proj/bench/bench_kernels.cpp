// Serial reference vs OpenMP kernels, plus end-to-end fit timings.
// Usage: fhyper_bench [--quick]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <vector>

#include "fhyper/data.hpp"
#include "fhyper/estimator.hpp"
#include "fhyper/quadrature.hpp"
#include "fhyper/reference.hpp"
#include "fhyper/spectral.hpp"

using namespace fhyper;
using clk = std::chrono::steady_clock;

namespace {

template <class F>
double best_ms(int reps, F &&f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clk::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(clk::now() - t0).count());
  }
  return best;
}

double max_diff(const std::vector<std::complex<double>> &a, const std::vector<std::complex<double>> &b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

} // namespace

int main(int argc, char **argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int reps = quick ? 1 : 3;
  const std::vector<int> degrees = quick ? std::vector<int>{4} : std::vector<int>{4, 8, 16, 24};
  int worst_status = 0;

  std::printf("threads=%d\n", omp_get_max_threads());
  std::printf("kernel,n,modes,points,serial_ms,parallel_ms,speedup,max_diff\n");
  for (int n : degrees) {
    const auto modes = enumerate_modes_below(2.0 * n);
    const auto rule = grid_rule(3 * n);
    const auto data = make_dataset(TargetFunction::wendland_wu(), GridSampling{3 * n});
    std::vector<double> amp(rule.size());
    for (std::size_t i = 0; i < amp.size(); ++i)
      amp[i] = rule.weights[i] * data.values[i];

    std::vector<std::complex<double>> cs, cp;
    const double ps = best_ms(reps, [&] { cs = reference::project(modes, rule.nodes, amp); });
    const double pp = best_ms(reps, [&] { cp = parallel::project(modes, rule.nodes, amp); });
    const double dp = max_diff(cs, cp);
    std::printf("project,%d,%zu,%zu,%.3f,%.3f,%.2f,%.3g\n", n, modes.size(), rule.size(), ps, pp, ps / pp, dp);

    const auto eval = uniform_points(quick ? 2000 : 20000, 7);
    std::vector<std::complex<double>> vs, vp;
    const double ss = best_ms(reps, [&] { vs = reference::synthesize(modes, cp, eval); });
    const double sp = best_ms(reps, [&] { vp = parallel::synthesize(modes, cp, eval); });
    const double ds = max_diff(vs, vp);
    std::printf("synthesize,%d,%zu,%zu,%.3f,%.3f,%.2f,%.3g\n", n, modes.size(), eval.size(), ss, sp, ss / sp, ds);

    // The two paths sum in different orders; they must still agree closely.
    if (dp > 1e-10 || ds > 1e-10)
      worst_status = 1;
  }

  std::printf("\nfit,n,servers,points,ms\n");
  for (int n : degrees) {
    for (int m : {1, 4}) {
      const auto shifts = interleaved_shifts(n, m);
      std::vector<QuadratureRule> rules;
      for (const auto &[a, b] : shifts)
        rules.push_back(grid_rule(n, a, b));
      const auto shards = shard_interleaved(TargetFunction::wendland_wu(), n, m, shifts, NoiseModel::gaussian(0.1, 1));
      const double t = best_ms(reps, [&] { (void)fit_dfh(shards, n, rules, m); });
      std::printf("dfh,%d,%d,%zu,%.3f\n", n, m, std::size_t(m) * rules.front().size(), t);
    }
  }
  return worst_status;
}
