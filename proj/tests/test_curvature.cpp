#include <array>
#include <cmath>

#include "crcurv/curvature.hpp"
#include "crcurv/errors.hpp"
#include "doctest.h"

using namespace crcurv;

namespace {

// central differences on the ambient value, for cross-checking exact derivatives
std::array<double, 4> fd_grad(const CurvatureFunction& k, const std::array<double, 4>& x,
                              double h = 1e-5) {
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) {
    auto hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (k.ambient_value(hi) - k.ambient_value(lo)) / (2.0 * h);
  }
  return g;
}

std::array<double, 16> fd_hess(const CurvatureFunction& k, const std::array<double, 4>& x,
                               double h = 1e-4) {
  std::array<double, 16> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto pp = x, pm = x, mp = x, mm = x;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      out[i * 4 + j] = (k.ambient_value(pp) - k.ambient_value(pm) - k.ambient_value(mp) +
                        k.ambient_value(mm)) /
                       (4.0 * h * h);
    }
  return out;
}

}  // namespace

TEST_CASE("expression evaluation follows the usual precedence rules") {
  const std::array<double, 4> north{0.0, 0.0, 1.0, 0.0};
  CHECK(Expression::parse("2 + x2").eval(north) == doctest::Approx(3.0));
  CHECK(Expression::parse("2*x2^2").eval({0.0, 0.0, 3.0, 0.0}) == doctest::Approx(18.0));
  CHECK(Expression::parse("(2 + x1) * y2").eval({1.0, 0.0, 0.0, 2.0}) == doctest::Approx(6.0));
  CHECK(Expression::parse("6 / 2 / 3").eval(north) == doctest::Approx(1.0));
  CHECK(Expression::parse("-x1 + 2").eval({0.5, 0.0, 0.0, 0.0}) == doctest::Approx(1.5));
  CHECK(Expression::parse("exp(0*x1)").eval(north) == doctest::Approx(1.0));
  CHECK(Expression::parse("x1^0.5").eval({4.0, 0.0, 0.0, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("malformed expressions raise input errors") {
  CHECK_THROWS_AS(Expression::parse("2 +"), Error);
  CHECK_THROWS_AS(Expression::parse("x5 + 1"), Error);
  CHECK_THROWS_AS(Expression::parse("(2 + x1"), Error);
  CHECK_THROWS_AS(Expression::parse("2 ** x1"), Error);
  CHECK_THROWS_AS(Expression::parse(""), Error);
  // exponents must be numeric constants for differentiation to stay exact
  CHECK_THROWS_AS(Expression::parse("x1 ^ x2"), Error);

  try {
    Expression::parse("2 + @");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::input);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("dual evaluation carries exact gradients and hessians") {
  const CurvatureFunction k = CurvatureFunction::from_expression("2 + x1^2 * y2 + exp(x2)");
  const std::array<double, 4> x{0.3, -0.2, 0.4, 0.7};

  REQUIRE(k.has_analytic());
  const auto g = k.ambient_grad(x);
  const auto gfd = fd_grad(k, x);
  for (int i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(gfd[i]).epsilon(1e-7));

  const auto h = k.ambient_hess(x);
  const auto hfd = fd_hess(k, x);
  for (int i = 0; i < 16; ++i) CHECK(h[i] == doctest::Approx(hfd[i]).epsilon(1e-4).scale(1.0));

  // symmetry of the exact hessian
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(h[i * 4 + j] == doctest::Approx(h[j * 4 + i]).epsilon(1e-14));
}

TEST_CASE("positivity screening rejects sign-changing candidates") {
  CHECK_THROWS_AS(CurvatureFunction::from_expression("x1"), Error);
  CHECK_THROWS_AS(CurvatureFunction::from_expression("x2 - 2"), Error);
  CHECK_NOTHROW(CurvatureFunction::from_expression("2 + x2"));
}

TEST_CASE("named families expand to the expected expressions") {
  const CurvatureFunction c = CurvatureFunction::from_family("constant:2.5");
  const CurvatureFunction a = CurvatureFunction::from_family("affine:2,0,0,1,0");
  const CurvatureFunction e = CurvatureFunction::from_expression("2 + x2");

  for (std::uint64_t i = 1; i <= 25; ++i) {
    const SpherePoint p = quasi_random_sphere_point(i, 5);
    CHECK(c.value(p) == doctest::Approx(2.5));
    CHECK(a.value(p) == doctest::Approx(e.value(p)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(CurvatureFunction::from_family("constant:"), Error);
  CHECK_THROWS_AS(CurvatureFunction::from_family("affine:1,2"), Error);
  CHECK_THROWS_AS(CurvatureFunction::from_family("mystery:1"), Error);
  CHECK_THROWS_AS(CurvatureFunction::from_family("constant:-1"), Error);
}

TEST_CASE("evaluator-backed functions differentiate by finite differences") {
  const CurvatureFunction exact = CurvatureFunction::from_expression("2 + x2 + x1*y1");
  const CurvatureFunction boxed = CurvatureFunction::from_evaluator(
      [](const std::array<double, 4>& x) { return 2.0 + x[2] + x[0] * x[1]; });

  CHECK_FALSE(boxed.has_analytic());
  const std::array<double, 4> x{0.1, -0.3, 0.6, 0.2};
  const auto ga = exact.ambient_grad(x);
  const auto gb = boxed.ambient_grad(x);
  for (int i = 0; i < 4; ++i) CHECK(gb[i] == doctest::Approx(ga[i]).epsilon(1e-6));
  const auto ha = exact.ambient_hess(x);
  const auto hb = boxed.ambient_hess(x);
  for (int i = 0; i < 16; ++i) CHECK(hb[i] == doctest::Approx(ha[i]).epsilon(1e-4).scale(1.0));
}

TEST_CASE("composition with a unitary matches pointwise evaluation and the chain rule") {
  const CurvatureFunction k = CurvatureFunction::from_expression("2 + x2 + 0.3*x1^2");
  const SpherePoint y = quasi_random_sphere_point(3, 11);
  const Unitary2 u = recenter_unitary(y);
  const CurvatureFunction ku = k.composed_with(u);

  for (std::uint64_t i = 1; i <= 20; ++i) {
    const SpherePoint p = quasi_random_sphere_point(i, 23);
    CHECK(ku.value(p) == doctest::Approx(k.value(u.apply(p))).epsilon(1e-13));
  }

  const std::array<double, 4> x = quasi_random_sphere_point(7, 23).ambient();
  const auto g = ku.ambient_grad(x);
  const auto gfd = fd_grad(ku, x);
  for (int i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(gfd[i]).epsilon(1e-6));
}

TEST_CASE("ambient matrix of a unitary is orthogonal and consistent with apply") {
  const Unitary2 u = recenter_unitary(quasi_random_sphere_point(9, 31), 0.4);
  const auto m = unitary_ambient_matrix(u);

  // M^T M = I
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += m[k * 4 + i] * m[k * 4 + j];
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
    }

  const SpherePoint p = quasi_random_sphere_point(4, 31);
  const auto px = p.ambient();
  const auto qx = u.apply(p).ambient();
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += m[i * 4 + j] * px[j];
    CHECK(acc == doctest::Approx(qx[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("quasi-random sphere points are deterministic unit vectors") {
  for (std::uint64_t i = 1; i <= 50; ++i) {
    const SpherePoint p = quasi_random_sphere_point(i, 7);
    CHECK(std::abs(std::norm(p.xi1) + std::norm(p.xi2) - 1.0) < 1e-12);
  }
  const SpherePoint a = quasi_random_sphere_point(12, 7);
  const SpherePoint b = quasi_random_sphere_point(12, 7);
  CHECK(a.xi1 == b.xi1);
  CHECK(a.xi2 == b.xi2);
  const SpherePoint c = quasi_random_sphere_point(12, 8);
  CHECK(std::abs(a.xi1 - c.xi1) + std::abs(a.xi2 - c.xi2) > 1e-6);
}
