#pragma once

#include <optional>

#include "bundleduel/distribution.hpp"

namespace bundleduel {

// Grid certificate that the revenue curve falls at rate >= lambda at every
// discount level alpha in [0, c] that lands on the grid:
//   (Rev(r) - Rev(alpha * r)) / ((1 - alpha) * r) >= lambda.
struct SensitivityCertificate {
  double lambda = 0.0;
  double c = 0.0;
  bool satisfied = false;   // lambda > 0
  double worst_alpha = 0.0; // smallest alpha attaining the minimum ratio
};

// lambda = min over grid-feasible alpha (alpha * r on the grid, alpha <= c)
// of the ratio above. Requires 0 < c < 1.
SensitivityCertificate sensitivity_lambda(const DiscreteDistribution& d, double c);

// Named analytic families with closed-form revenue curves. Smoothness and
// concavity rates are computed from the exact derivatives, not from grids:
//   delta_smooth:  inf over (0, r) of G'(x) * r
//   delta_concave: inf over (0, r) of -h''(x) * r, h(x) = x * (1 - G(x))
enum class FamilyKind {
  Uniform,                // params a, b: uniform density on [a, b], 0 <= a < b
  Triangular,             // param b: density 2(b-x)/b^2 on [0, b]
  TruncatedLinearDensity  // params b, s: density (1 - s*x/b) / (b*(1-s/2)) on [0, b], 0 <= s <= 1
};

struct Family {
  FamilyKind kind;
  double a = 0.0;
  double b = 1.0;
  double s = 0.0;
};

struct FamilyCertificate {
  double delta_smooth = 0.0;
  double delta_concave = 0.0;
  double lambda = 0.0;  // delta_concave / 2 * (1 - c)
  double c = 0.0;       // defaults to 1 - G(r)^4 / 9
  double r = 0.0;       // continuous revenue-maximizing price
  double rev_at_r = 0.0;
  double cdf_at_r = 0.0;
};

// Throws UnsupportedFamily for out-of-range parameters or unknown kinds.
FamilyCertificate certify_family(const Family& family, std::optional<double> c = std::nullopt);

// Grid approximation of the family (cell-mass discretization), used to
// cross-check the analytic certificate against sensitivity_lambda.
DiscreteDistribution discretize_family(const Family& family, const ValueGrid& grid);

}  // namespace bundleduel
