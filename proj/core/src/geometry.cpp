#include "crcurv/geometry.hpp"

#include <cmath>

#include "crcurv/errors.hpp"

namespace crcurv {

double gauge_norm(const HPoint& p) {
  double zz = std::norm(p.z);
  return std::pow(zz * zz + p.t * p.t, 0.25);
}

HPoint group_mul(const HPoint& p, const HPoint& q) {
  // t-component carries the symplectic area term 2 Im(z conj(z')).
  double im = p.z.imag() * q.z.real() - p.z.real() * q.z.imag();
  return HPoint{p.z + q.z, p.t + q.t + 2.0 * im};
}

HPoint group_inv(const HPoint& p) { return HPoint{-p.z, -p.t}; }

double gauge_dist(const HPoint& p, const HPoint& q) {
  return gauge_norm(group_mul(group_inv(p), q));
}

SpherePoint SpherePoint::from(cd xi1, cd xi2, double norm_tol) {
  double n2 = std::norm(xi1) + std::norm(xi2);
  double n = std::sqrt(n2);
  if (std::abs(n - 1.0) > norm_tol)
    fail(Errc::domain, "SpherePoint: coordinates are not on the unit sphere");
  return SpherePoint{xi1 / n, xi2 / n};
}

std::array<double, 4> SpherePoint::ambient() const {
  return {xi1.real(), xi1.imag(), xi2.real(), xi2.imag()};
}

SpherePoint SpherePoint::from_ambient(const std::array<double, 4>& x, double norm_tol) {
  return from(cd{x[0], x[1]}, cd{x[2], x[3]}, norm_tol);
}

cd hermitian_inner(const SpherePoint& a, const SpherePoint& b) {
  return a.xi1 * std::conj(b.xi1) + a.xi2 * std::conj(b.xi2);
}

double cr_distance(const SpherePoint& a, const SpherePoint& b) {
  // Re(1 - <a,b>) = |a - b|^2 / 2 exactly on the unit sphere.
  double diff2 = std::norm(a.xi1 - b.xi1) + std::norm(a.xi2 - b.xi2);
  double re = 0.5 * diff2;
  cd inner = hermitian_inner(a, b);
  double im = -inner.imag();
  double mod = std::hypot(re, im);
  return std::sqrt(2.0 * mod);
}

SpherePoint cayley(const HPoint& p) {
  cd w{1.0 + std::norm(p.z), -p.t};
  cd xi1 = 2.0 * p.z / w;
  cd xi2 = (2.0 - w) / w;
  // |xi|^2 = ((1+|z|^2)^2 + t^2)/|w|^2 = 1 holds identically; renormalize to
  // keep downstream unit-norm checks tight.
  return SpherePoint::from(xi1, xi2, 1e-8);
}

HPoint cayley_inv(const SpherePoint& xi, double pole_tol) {
  cd denom = 1.0 + xi.xi2;
  if (std::abs(denom) < pole_tol)
    fail(Errc::domain, "cayley_inv: point is at (or numerically at) the chart pole");
  cd w = 2.0 / denom;
  cd z = xi.xi1 * w / 2.0;
  return HPoint{z, -w.imag()};
}

SpherePoint Unitary2::apply(const SpherePoint& x) const {
  return SpherePoint::from(a * x.xi1 + b * x.xi2, c * x.xi1 + d * x.xi2, 1e-8);
}

Unitary2 Unitary2::inverse() const {
  Unitary2 r;
  r.a = std::conj(a);
  r.b = std::conj(c);
  r.c = std::conj(b);
  r.d = std::conj(d);
  return r;
}

Unitary2 recenter_unitary(const SpherePoint& y, double phase) {
  cd rot = std::polar(1.0, phase);
  Unitary2 u;
  u.a = -rot * y.xi2;
  u.b = rot * y.xi1;
  u.c = std::conj(y.xi1);
  u.d = std::conj(y.xi2);
  return u;
}

Chart Chart::centered_at(const SpherePoint& y, double phase) {
  return Chart{recenter_unitary(y, phase)};
}

Chart Chart::identity() { return Chart{Unitary2{}}; }

HPoint Chart::to_chart(const SpherePoint& x) const { return cayley_inv(u.apply(x)); }

SpherePoint Chart::from_chart(const HPoint& p) const { return u.inverse().apply(cayley(p)); }

SpherePoint Chart::center() const { return u.inverse().apply(SpherePoint{cd{0, 0}, cd{1, 0}}); }

double Chart::abs_w(const HPoint& p) {
  return std::hypot(1.0 + std::norm(p.z), p.t);
}

}  // namespace crcurv
