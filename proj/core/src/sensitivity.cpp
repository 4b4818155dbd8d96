#include "bundleduel/sensitivity.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bundleduel {

SensitivityCertificate sensitivity_lambda(const DiscreteDistribution& d, double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw OffGridValue("sensitivity threshold c must lie in (0, 1)");
  }
  const Tick r = myerson_tick(d);
  const Money r_money = d.grid().value(r);
  const double rev_r = revenue_at(d, r_money);

  // Grid-feasible discounts: alpha = k / r so alpha * r is a lattice point.
  SensitivityCertificate cert;
  cert.c = c;
  double lambda = std::numeric_limits<double>::infinity();
  double worst_alpha = 0.0;
  const Tick k_max = static_cast<Tick>(std::floor(c * static_cast<double>(r) + 1e-9));
  for (Tick k = 0; k <= k_max; ++k) {
    const double alpha = static_cast<double>(k) / static_cast<double>(r);
    const double rev_alpha = revenue_at(d, d.grid().value(k));
    const double denom = (1.0 - alpha) * r_money;  // = (r - k) * step > 0
    const double ratio = (rev_r - rev_alpha) / denom;
    if (ratio < lambda) {
      lambda = ratio;
      worst_alpha = alpha;
    }
  }
  cert.lambda = lambda;
  cert.worst_alpha = worst_alpha;
  cert.satisfied = lambda > 0.0;
  return cert;
}

namespace {

struct Closed {
  double r;            // continuous revenue maximizer
  double cdf_at_r;     // G(r)
  double delta_smooth;
  double delta_concave;
};

Closed certify_uniform(double a, double b) {
  if (!(a >= 0.0) || !(b > a)) throw UnsupportedFamily("uniform requires 0 <= a < b");
  Closed out{};
  out.r = (b >= 2.0 * a) ? b / 2.0 : a;
  if (a > 0.0) {
    // Density is zero on (0, a): no smoothness and a flat revenue curve there.
    out.delta_smooth = 0.0;
    out.delta_concave = 0.0;
    out.cdf_at_r = (out.r <= a) ? 0.0 : (out.r - a) / (b - a);
  } else {
    // G(x) = x/b, h(x) = x(1 - x/b): G' = 1/b, h'' = -2/b on (0, r).
    out.cdf_at_r = out.r / b;
    out.delta_smooth = out.r / b;
    out.delta_concave = 2.0 * out.r / b;
  }
  return out;
}

// f(x) = (1 - s x / b) / (b (1 - s/2)) on [0, b]. s = 0 is uniform[0, b];
// s = 1 is the decreasing triangular density.
Closed certify_truncated_linear(double b, double s) {
  if (!(b > 0.0) || !(s >= 0.0 && s <= 1.0)) {
    throw UnsupportedFamily("truncated linear density requires b > 0 and s in [0, 1]");
  }
  Closed out{};
  const double norm = b * (1.0 - s / 2.0);
  double r;
  if (s == 0.0) {
    r = b / 2.0;
  } else {
    // h'(r) = 0  <=>  (3s / 2b) r^2 - 2 r + norm = 0; the smaller root is
    // the maximizer inside [0, b].
    const double disc = 1.0 - 1.5 * s * (1.0 - s / 2.0);
    r = b * (1.0 - std::sqrt(disc)) / (1.5 * s);
  }
  out.r = r;
  out.cdf_at_r = (r - s * r * r / (2.0 * b)) / norm;
  // G'(x) = (1 - s x / b)/norm is decreasing; -h''(x) = (2 - 3 s x / b)/norm
  // is decreasing; both infima over (0, r) sit at x = r.
  out.delta_smooth = r * (1.0 - s * r / b) / norm;
  out.delta_concave = r * (2.0 - 3.0 * s * r / b) / norm;
  return out;
}

}  // namespace

FamilyCertificate certify_family(const Family& family, std::optional<double> c) {
  Closed closed{};
  switch (family.kind) {
    case FamilyKind::Uniform:
      closed = certify_uniform(family.a, family.b);
      break;
    case FamilyKind::Triangular:
      closed = certify_truncated_linear(family.b, 1.0);
      break;
    case FamilyKind::TruncatedLinearDensity:
      closed = certify_truncated_linear(family.b, family.s);
      break;
    default:
      throw UnsupportedFamily("unknown family kind");
  }
  FamilyCertificate cert;
  cert.delta_smooth = closed.delta_smooth;
  cert.delta_concave = closed.delta_concave;
  cert.r = closed.r;
  cert.cdf_at_r = closed.cdf_at_r;
  cert.rev_at_r = closed.r * (1.0 - closed.cdf_at_r);
  const double g4 = std::pow(closed.cdf_at_r, 4);
  cert.c = c.value_or(1.0 - g4 / 9.0);
  if (!(cert.c > 0.0 && cert.c < 1.0)) cert.c = std::fmin(std::fmax(cert.c, 1e-9), 1.0 - 1e-9);
  cert.lambda = cert.delta_concave / 2.0 * (1.0 - cert.c);
  return cert;
}

DiscreteDistribution discretize_family(const Family& family, const ValueGrid& grid) {
  // Atom t receives the continuous mass of the cell [t*step, (t+1)*step).
  double a = 0.0, b = family.b, s = 0.0;
  switch (family.kind) {
    case FamilyKind::Uniform:
      a = family.a;
      s = 0.0;
      break;
    case FamilyKind::Triangular:
      s = 1.0;
      break;
    case FamilyKind::TruncatedLinearDensity:
      s = family.s;
      break;
  }
  auto cdf = [&](double x) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    if (family.kind == FamilyKind::Uniform) return (x - a) / (b - a);
    return (x - s * x * x / (2.0 * b)) / (b * (1.0 - s / 2.0));
  };
  std::vector<Atom> atoms;
  for (Tick t = 0; t <= grid.max_tick; ++t) {
    const double lo = grid.value(t);
    const double hi = grid.value(t + 1);
    const double p = (t == grid.max_tick) ? 1.0 - cdf(lo) : cdf(hi) - cdf(lo);
    if (p > 0.0) atoms.push_back(Atom{t, p});
  }
  return make_distribution_ticks(grid, std::move(atoms));
}

}  // namespace bundleduel
