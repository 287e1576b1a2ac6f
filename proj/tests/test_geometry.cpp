#include <cmath>
#include <complex>

#include "crcurv/errors.hpp"
#include "crcurv/geometry.hpp"
#include "doctest.h"

using namespace crcurv;

namespace {

bool close(const HPoint& p, const HPoint& q, double tol = 1e-12) {
  return std::abs(p.z - q.z) < tol && std::abs(p.t - q.t) < tol;
}

bool close_sp(const SpherePoint& a, const SpherePoint& b, double tol = 1e-12) {
  return std::abs(a.xi1 - b.xi1) < tol && std::abs(a.xi2 - b.xi2) < tol;
}

HPoint dilate(const HPoint& p, double lambda) {
  return {lambda * p.z, lambda * lambda * p.t};
}

}  // namespace

TEST_CASE("group law: identity, inverses, associativity, non-commutativity") {
  const HPoint e{};
  const HPoint p{cd(0.3, -1.1), 0.7};
  const HPoint q{cd(-0.5, 0.2), -1.3};
  const HPoint r{cd(1.7, 0.4), 2.2};

  CHECK(close(group_mul(p, e), p));
  CHECK(close(group_mul(e, p), p));
  CHECK(close(group_mul(p, group_inv(p)), e));
  CHECK(close(group_mul(group_inv(p), p), e));
  CHECK(close(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r))));

  // the commutator shows up in the t component only
  const HPoint pq = group_mul(p, q);
  const HPoint qp = group_mul(q, p);
  CHECK(std::abs(pq.z - qp.z) < 1e-15);
  const double twist = 4.0 * std::imag(p.z * std::conj(q.z));
  CHECK(pq.t - qp.t == doctest::Approx(twist).epsilon(1e-12));
}

TEST_CASE("gauge norm is homogeneous under dilations and the distance is left invariant") {
  const HPoint p{cd(0.9, 0.2), -0.8};
  const HPoint q{cd(-0.1, 1.4), 0.6};
  const HPoint g{cd(0.4, -0.7), 1.9};

  CHECK(gauge_norm(dilate(p, 2.5)) == doctest::Approx(2.5 * gauge_norm(p)).epsilon(1e-13));
  CHECK(gauge_dist(group_mul(g, p), group_mul(g, q)) ==
        doctest::Approx(gauge_dist(p, q)).epsilon(1e-12));
  CHECK(gauge_dist(p, p) == 0.0);
  CHECK(gauge_norm(HPoint{cd(0.0, 0.0), 1.0}) == doctest::Approx(1.0));
  CHECK(gauge_norm(HPoint{cd(1.0, 0.0), 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("sphere points renormalize near-unit input and reject the rest") {
  const SpherePoint a = SpherePoint::from(cd(1.0 + 5e-12, 0.0), cd(0.0, 0.0));
  CHECK(std::abs(std::norm(a.xi1) + std::norm(a.xi2) - 1.0) < 1e-14);
  CHECK_THROWS_AS(SpherePoint::from(cd(0.5, 0.0), cd(0.0, 0.0)), Error);

  const auto amb = a.ambient();
  const SpherePoint b = SpherePoint::from_ambient(amb);
  CHECK(close_sp(a, b));
}

TEST_CASE("cr distance: symmetry, range, antipodal maximum") {
  const SpherePoint n = SpherePoint::from(cd(0.0, 0.0), cd(1.0, 0.0));
  const SpherePoint s = SpherePoint::from(cd(0.0, 0.0), cd(-1.0, 0.0));
  const SpherePoint x = SpherePoint::from(cd(0.6, 0.0), cd(0.8, 0.0));

  CHECK(cr_distance(n, n) == 0.0);
  CHECK(cr_distance(n, x) == doctest::Approx(cr_distance(x, n)).epsilon(1e-15));
  CHECK(cr_distance(n, s) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cr_distance(n, x) > 0.0);
  CHECK(cr_distance(n, x) <= 2.0);

  // hermitian inner product is conjugate symmetric
  CHECK(std::abs(hermitian_inner(n, x) - std::conj(hermitian_inner(x, n))) < 1e-15);
}

TEST_CASE("cayley chart: origin maps to the center, round trips hold, pole is fenced") {
  CHECK(close_sp(cayley(HPoint{}), SpherePoint::from(cd(0, 0), cd(1, 0))));

  for (const HPoint p : {HPoint{cd(0.3, 0.4), 0.9}, HPoint{cd(-1.2, 0.1), -2.0},
                         HPoint{cd(0.0, 2.0), 4.0}}) {
    const SpherePoint xi = cayley(p);
    CHECK(std::abs(std::norm(xi.xi1) + std::norm(xi.xi2) - 1.0) < 1e-13);
    CHECK(close(cayley_inv(xi), p, 1e-10));
  }

  CHECK_THROWS_AS(cayley_inv(SpherePoint::from(cd(0, 0), cd(-1, 0))), Error);
}

TEST_CASE("recentering unitaries move the base point to the chart center") {
  const SpherePoint y = SpherePoint::from(cd(0.48, -0.36), cd(0.48, 0.64), 1e-6);
  for (double phase : {0.0, 0.7, -2.1}) {
    const Unitary2 u = recenter_unitary(y, phase);
    const SpherePoint image = u.apply(y);
    CHECK(std::abs(image.xi1) < 1e-12);
    CHECK(std::abs(image.xi2 - cd(1.0, 0.0)) < 1e-12);

    // unitarity via the inverse round trip on another point
    const SpherePoint x = SpherePoint::from(cd(0.0, 0.8), cd(0.6, 0.0));
    CHECK(close_sp(u.inverse().apply(u.apply(x)), x, 1e-13));
    // distances are preserved
    CHECK(cr_distance(u.apply(x), u.apply(y)) == doctest::Approx(cr_distance(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("charts round trip and report their center") {
  const SpherePoint y = SpherePoint::from(cd(-0.3, 0.5), cd(0.1, std::sqrt(1 - 0.09 - 0.25 - 0.01)), 1e-6);
  const Chart chart = Chart::centered_at(y);

  CHECK(close_sp(chart.center(), y, 1e-12));
  CHECK(gauge_norm(chart.to_chart(y)) < 1e-10);

  const SpherePoint x = SpherePoint::from(cd(0.2, 0.1), cd(0.0, std::sqrt(1 - 0.05)), 1e-6);
  CHECK(close_sp(chart.from_chart(chart.to_chart(x)), x, 1e-11));

  CHECK(Chart::abs_w(HPoint{}) == doctest::Approx(1.0));
  CHECK(Chart::abs_w(HPoint{cd(1.0, 0.0), 2.0}) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
}

TEST_CASE("chart distance over gauge norm approaches 2 near the center") {
  const Chart chart = Chart::identity();
  const SpherePoint center = chart.center();
  for (double eps : {1e-2, 1e-3}) {
    const HPoint p{cd(eps, 0.6 * eps), 0.5 * eps * eps};
    const double ratio = cr_distance(chart.from_chart(p), center) / gauge_norm(p);
    CHECK(ratio == doctest::Approx(2.0).epsilon(5e-3));
  }
}
