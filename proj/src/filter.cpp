#include "fhyper/filter.hpp"

#include <algorithm>
#include <cmath>

#include "fhyper/error.hpp"

namespace fhyper {

namespace {

double horner(std::span<const double> c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * s + *it;
  return acc;
}

// Coefficients of p(s + shift) given those of p(s).
std::vector<double> taylor_shift(std::span<const double> c, double shift) {
  std::vector<double> out(c.begin(), c.end());
  const auto n = out.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j)
      out[j - 1] += shift * out[j];
  return out;
}

} // namespace

Filter::Filter(std::vector<double> middle, int smoothness)
    : middle_(std::move(middle)), smoothness_(smoothness) {
  if (middle_.empty())
    throw PreconditionError("Filter: empty coefficient table");
  if (smoothness_ < 0)
    throw PreconditionError("Filter: smoothness order must be >= 0");
  if (std::abs(middle_polynomial(0.0) - 1.0) > 1e-12)
    throw PreconditionError("Filter: middle segment must equal 1 at t = 1");
  if (std::abs(middle_polynomial(1.0)) > 1e-12)
    throw PreconditionError("Filter: middle segment must vanish at t = 2");
  for (int i = 1; i < 1000; ++i) {
    double v = middle_polynomial(i / 1000.0);
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw PreconditionError("Filter: values must lie in [0, 1]");
  }
}

const Filter &Filter::standard() {
  static const Filter h(
      {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -462.0, 1980.0, -3465.0, 3080.0, -1386.0, 252.0}, 5);
  return h;
}

double Filter::middle_polynomial(double s) const { return horner(middle_, s); }

double Filter::operator()(double t) const {
  if (!(t >= 0.0))
    throw PreconditionError("Filter: argument must be >= 0");
  if (t <= 1.0)
    return 1.0;
  if (t >= 2.0)
    return 0.0;
  return middle_polynomial(t - 1.0);
}

std::vector<double> central_difference_weights(int order, int half_width) {
  // Fornberg's recursion on nodes 0, -1, 1, -2, 2, ... evaluated at 0.
  const int npts = 2 * half_width + 1;
  std::vector<double> nodes;
  nodes.push_back(0.0);
  for (int j = 1; j <= half_width; ++j) {
    nodes.push_back(-j);
    nodes.push_back(j);
  }
  std::vector<std::vector<double>> c(npts, std::vector<double>(order + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < npts; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      for (int k = std::min(i, order); k >= 0; --k) {
        if (j == i - 1) {
          c[i][k] = c1 / c2 * ((k > 0 ? k * c[i - 1][k - 1] : 0.0) - nodes[i - 1] * c[i - 1][k]);
        }
        c[j][k] = ((nodes[i]) * c[j][k] - (k > 0 ? k * c[j][k - 1] : 0.0)) / c3;
      }
    }
    c1 = c2;
  }
  std::vector<double> w(npts);
  for (int i = 0; i < npts; ++i) {
    const int offset = int(nodes[i]);
    w[offset + half_width] = c[i][order];
  }
  return w;
}

std::vector<SmoothnessGap> boundary_smoothness_report(const Filter &filter, int max_order,
                                                      double step) {
  if (max_order < 0 || max_order > 6)
    throw PreconditionError("boundary_smoothness_report: max_order must be in [0, 6]");
  if (!(step > 0.0))
    throw PreconditionError("boundary_smoothness_report: step must be > 0");

  auto coeffs = filter.middle_coefficients();
  // At t = 1: middle piece minus the plateau, in s = t - 1.
  std::vector<double> jump_one(coeffs.begin(), coeffs.end());
  jump_one[0] -= 1.0;
  // At t = 2: zero piece minus the middle piece, in u = t - 2.
  std::vector<double> jump_two = taylor_shift(coeffs, 1.0);
  for (double &v : jump_two)
    v = -v;

  const int degree = int(coeffs.size()) - 1;
  const int half = std::max(6, (degree + 1) / 2);

  std::vector<SmoothnessGap> report;
  for (int k = 0; k <= max_order; ++k) {
    const auto w = central_difference_weights(k, half);
    double d1 = 0.0, d2 = 0.0;
    for (int j = -half; j <= half; ++j) {
      d1 += w[j + half] * horner(jump_one, j * step);
      d2 += w[j + half] * horner(jump_two, j * step);
    }
    const double scale = std::pow(step, k);
    report.push_back({k, std::abs(d1) / scale, std::abs(d2) / scale});
  }
  return report;
}

} // namespace fhyper
