#pragma once

#include <span>
#include <vector>

namespace fhyper {

/// Compactly supported filter H on [0, inf): 1 on [0, 1], a polynomial in
/// s = t - 1 on (1, 2), and 0 from 2 on.
class Filter {
public:
  /// `middle` holds the power-series coefficients of H(1 + s) in s, lowest
  /// degree first. The table is checked for continuity at both breakpoints and
  /// for 0 <= H <= 1 on (1, 2); violations throw PreconditionError.
  Filter(std::vector<double> middle, int smoothness);

  /// The C^5 filter 1 + s^6 (-462 + 1980 s - 3465 s^2 + 3080 s^3 - 1386 s^4 + 252 s^5).
  static const Filter &standard();

  /// Throws PreconditionError for t < 0 or NaN.
  double operator()(double t) const;

  int smoothness() const { return smoothness_; }
  std::span<const double> middle_coefficients() const { return middle_; }
  static constexpr double support_end() { return 2.0; }

  /// Middle polynomial evaluated off its segment (analytic continuation).
  double middle_polynomial(double s) const;

private:
  std::vector<double> middle_;
  int smoothness_;
};

struct SmoothnessGap {
  int order;
  double gap_at_one;
  double gap_at_two;
};

/// For orders 0..max_order (max_order <= 6), the gap between the derivative
/// estimates of the two pieces meeting at t = 1 and at t = 2. Each estimate is
/// a central finite difference with the given step, applied to the piece's
/// polynomial continued across the breakpoint. The stencil is wide enough to
/// be exact on the shipped degree-11 piece, so the only error is rounding.
std::vector<SmoothnessGap> boundary_smoothness_report(const Filter &filter, int max_order,
                                                      double step = 1e-3);

/// Weights of the central finite-difference stencil at offsets -half..half
/// (unit spacing) for the given derivative order.
std::vector<double> central_difference_weights(int order, int half_width);

} // namespace fhyper
