#include "doctest.h"

#include "bundleduel/sensitivity.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace bundleduel;

TEST_CASE("sensitivity lambda on a half-step binary distribution is exactly 1/2") {
  // Rev(x) = x/2 on (0, 1]: every grid discount drains revenue at rate 1/2.
  const ValueGrid grid = make_grid(0.5, 1.0);
  const DiscreteDistribution d = binary_distribution(grid, 1.0, 0.5);
  const SensitivityCertificate cert = sensitivity_lambda(d, 0.9);
  CHECK(cert.lambda == 0.5);
  CHECK(cert.satisfied);
  CHECK(cert.worst_alpha == 0.0);
  CHECK(cert.c == 0.9);
}

TEST_CASE("a point mass has lambda 1: all revenue is lost at any discount") {
  const ValueGrid grid = make_grid(1.0, 1.0);
  const DiscreteDistribution d = make_distribution_ticks(grid, {{1, 1.0}});
  const SensitivityCertificate cert = sensitivity_lambda(d, 0.9);
  CHECK(cert.lambda == 1.0);
  CHECK(cert.worst_alpha == 0.0);
}

TEST_CASE("an equal-revenue distribution has lambda 0 at its flat discounts") {
  const ValueGrid grid = make_grid(1.0, 4.0);
  const std::vector<std::pair<Money, double>> atoms = {{1.0, 0.5}, {2.0, 0.25}, {4.0, 0.25}};
  const DiscreteDistribution d = make_distribution(grid, atoms);
  const SensitivityCertificate cert = sensitivity_lambda(d, 0.9);
  CHECK(cert.lambda == 0.0);
  CHECK(!cert.satisfied);
  // alpha = 1/4 is the smallest discount where Rev(alpha * r) = Rev(r).
  CHECK(cert.worst_alpha == doctest::Approx(0.25));
}

TEST_CASE("sensitivity threshold must lie strictly inside (0, 1)") {
  const ValueGrid grid = make_grid(0.5, 1.0);
  const DiscreteDistribution d = binary_distribution(grid, 1.0, 0.5);
  CHECK_THROWS_AS(sensitivity_lambda(d, 0.0), OffGridValue);
  CHECK_THROWS_AS(sensitivity_lambda(d, 1.0), OffGridValue);
}

TEST_CASE("uniform[0,1] analytic certificate") {
  const FamilyCertificate cert = certify_family(Family{FamilyKind::Uniform, 0.0, 1.0, 0.0});
  CHECK(cert.r == doctest::Approx(0.5));
  CHECK(cert.cdf_at_r == doctest::Approx(0.5));
  CHECK(cert.rev_at_r == doctest::Approx(0.25));
  CHECK(cert.delta_smooth == doctest::Approx(0.5));
  CHECK(cert.delta_concave == doctest::Approx(1.0));
  CHECK(cert.c == doctest::Approx(1.0 - 0.0625 / 9.0));
  CHECK(cert.lambda == doctest::Approx(0.5 * (1.0 - cert.c)));

  const FamilyCertificate at_09 = certify_family(Family{FamilyKind::Uniform, 0.0, 1.0, 0.0}, 0.9);
  CHECK(at_09.lambda == doctest::Approx(0.05));
}

TEST_CASE("triangular certificate matches the closed-form maximizer") {
  const FamilyCertificate cert = certify_family(Family{FamilyKind::Triangular, 0.0, 1.0, 0.0});
  CHECK(cert.r == doctest::Approx(1.0 / 3.0));
  CHECK(cert.cdf_at_r == doctest::Approx(5.0 / 9.0));
  CHECK(cert.delta_smooth == doctest::Approx(4.0 / 9.0));
  CHECK(cert.delta_concave == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(certify_family(Family{FamilyKind::Uniform, 1.0, 1.0, 0.0}), UnsupportedFamily);
  CHECK_THROWS_AS(certify_family(Family{FamilyKind::TruncatedLinearDensity, 0.0, 1.0, 1.5}),
                  UnsupportedFamily);
  CHECK_THROWS_AS(certify_family(Family{FamilyKind::TruncatedLinearDensity, 0.0, -1.0, 0.5}),
                  UnsupportedFamily);
}

TEST_CASE("discretized uniform approximates the analytic lambda at c = 0.9") {
  // Rev(x) = x(1 - x) on the unit interval: the analytic drop rate at
  // discounts up to 0.9 is 0.05; a 1e-2 grid lands within one cell of it.
  const ValueGrid grid = make_grid(0.01, 1.0);
  const DiscreteDistribution d =
      discretize_family(Family{FamilyKind::Uniform, 0.0, 1.0, 0.0}, grid);
  const SensitivityCertificate cert = sensitivity_lambda(d, 0.9);
  CHECK(cert.satisfied);
  CHECK(std::fabs(cert.lambda - 0.05) < 0.02);
}
