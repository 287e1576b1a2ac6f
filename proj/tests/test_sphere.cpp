#include <cmath>

#include "crcurv/bubbles.hpp"
#include "crcurv/curvature.hpp"
#include "crcurv/errors.hpp"
#include "crcurv/sphere.hpp"
#include "doctest.h"

using namespace crcurv;

namespace {

const double kPi = std::acos(-1.0);

double kappa_value() {
  static const double kappa = Calibration::compute(64).kappa;
  return kappa;
}

}  // namespace

TEST_CASE("affine curvature has exactly the polar max/min pair") {
  const CurvatureFunction K = CurvatureFunction::from_expression("2 + x2");
  std::vector<std::string> warnings;
  const auto recs = find_critical_points(K, kappa_value(), {}, &warnings);

  REQUIRE(recs.size() == 2);
  CHECK(warnings.empty());

  const auto& top = recs[0];
  CHECK(top.label == "y1");
  CHECK(top.k_value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(top.morse_index == 3);
  CHECK_FALSE(top.degenerate);
  CHECK(top.grad_norm <= 1e-8);
  const auto loc = top.location.ambient();
  CHECK(std::abs(loc[0]) < 1e-9);
  CHECK(std::abs(loc[1]) < 1e-9);
  CHECK(loc[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(loc[3]) < 1e-9);
  for (double e : top.hessian_eigs) CHECK(e == doctest::Approx(-1.0).epsilon(1e-8));

  // the conformal sublaplacian of x2 at the pole is -2 / kappa^2
  const double expected = -2.0 * std::pow(128.0 * kPi, 2);
  CHECK(top.sublap_K == doctest::Approx(expected).epsilon(1e-6));
  CHECK(top.kplus_margin == doctest::Approx(-expected / 9.0).epsilon(1e-6));
  CHECK(top.kplus_member);

  const auto& bottom = recs[1];
  CHECK(bottom.label == "y2");
  CHECK(bottom.k_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bottom.morse_index == 0);
  CHECK(bottom.sublap_K == doctest::Approx(-expected).epsilon(1e-6));
  CHECK_FALSE(bottom.kplus_member);
}

TEST_CASE("generic diagonal quadratics produce the full axis frame") {
  const CurvatureFunction K =
      CurvatureFunction::from_expression("2 + 0.3*x1^2 + 0.2*y1^2 + 0.1*x2^2");
  const auto recs = find_critical_points(K, kappa_value());

  // one antipodal pair per ambient axis
  REQUIRE(recs.size() == 8);
  int morse_count[4] = {0, 0, 0, 0};
  int alternating = 0;
  for (const auto& r : recs) {
    ++morse_count[r.morse_index];
    alternating += ((3 - r.morse_index) % 2 == 0) ? 1 : -1;
    CHECK_FALSE(r.degenerate);
  }
  for (int m = 0; m < 4; ++m) CHECK(morse_count[m] == 2);
  CHECK(alternating == 0);

  // the two maxima sit at +-e_{x1} and keep the tangent spectrum of the form
  CHECK(recs[0].k_value == doctest::Approx(2.3).epsilon(1e-10));
  CHECK(recs[0].hessian_eigs[0] == doctest::Approx(-0.6).epsilon(1e-7));
  CHECK(recs[0].hessian_eigs[2] == doctest::Approx(-0.2).epsilon(1e-7));
}

TEST_CASE("degenerate critical manifolds are rejected loudly") {
  const CurvatureFunction K = CurvatureFunction::from_expression("2 + x2^2");
  try {
    find_critical_points(K, kappa_value());
    FAIL("expected a degenerate-point rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::c0_violation);
    CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
  }
}

TEST_CASE("sublaplacian at a critical point is chart independent") {
  const CurvatureFunction K = CurvatureFunction::from_expression("2 + x2");
  const SpherePoint pole = SpherePoint::from(cd(0, 0), cd(1, 0));
  const double base = sublaplacian_K_at(K, pole, kappa_value());
  for (double phase : {0.4, 1.9, -0.8}) {
    const double v = sublaplacian_K_at(K, pole, kappa_value(), phase);
    CHECK(v == doctest::Approx(base).epsilon(1e-6));
  }

  // off-critical evaluation is refused
  const SpherePoint off = SpherePoint::from(cd(0.6, 0.0), cd(0.8, 0.0));
  CHECK_THROWS_AS(sublaplacian_K_at(K, off, kappa_value()), Error);
}

TEST_CASE("green's function: symmetry, positivity, closed form, diagonal guard") {
  GreenData g;
  g.c_G = 512.0 * kPi;
  const SpherePoint a = quasi_random_sphere_point(1, 3);
  const SpherePoint b = quasi_random_sphere_point(2, 3);

  const double gab = greens_function(g, a, b);
  CHECK(gab > 0.0);
  CHECK(gab == doctest::Approx(greens_function(g, b, a)).epsilon(1e-14));
  const double d = cr_distance(a, b);
  CHECK(gab == doctest::Approx(g.c_G / (d * d)).epsilon(1e-13));

  // antipodal pair: distance 2, so G = c_G / 4
  const SpherePoint n = SpherePoint::from(cd(0, 0), cd(1, 0));
  const SpherePoint s = SpherePoint::from(cd(0, 0), cd(-1, 0));
  CHECK(greens_function(g, n, s) == doctest::Approx(128.0 * kPi).epsilon(1e-12));

  CHECK_THROWS_AS(greens_function(g, a, a), Error);

  // regular part hook feeds a_at
  g.regular_part = [](const SpherePoint&) { return 0.25; };
  CHECK(g.a_at(a) == doctest::Approx(0.25));
  GreenData bare;
  CHECK(bare.a_at(a) == 0.0);
}

TEST_CASE("condition check balances margins and degeneracy flags") {
  const CurvatureFunction K = CurvatureFunction::from_expression("2 + x2");
  auto recs = find_critical_points(K, kappa_value());
  CHECK(check_C0(recs).pass);

  auto ambiguous = recs;
  ambiguous[0].kplus_margin = 1e-12;
  const auto verdict = check_C0(ambiguous);
  CHECK_FALSE(verdict.pass);
  REQUIRE(!verdict.violations.empty());

  auto degen = recs;
  degen[1].degenerate = true;
  CHECK_FALSE(check_C0(degen).pass);
}

TEST_CASE("newton coverage warning appears when multistart is too small") {
  const CurvatureFunction K = CurvatureFunction::from_expression("2 + x2");
  CriticalPointConfig cfg;
  cfg.multistart = 1;  // one start can reach at most one point
  std::vector<std::string> warnings;
  const auto recs = find_critical_points(K, kappa_value(), cfg, &warnings);
  if (recs.size() < 2) CHECK(!warnings.empty());
}
