#pragma once

// Point types and the chart machinery connecting the Heisenberg group
// H^1 = C x R to the unit sphere S^3 in C^2.
//
// Conventions fixed here and relied on everywhere else:
//  * group law       (z,t).(z',t') = (z + z', t + t' + 2 Im(z conj(z')))
//  * gauge norm      |(z,t)| = (|z|^4 + t^2)^(1/4)
//  * Cayley chart    cayley(z,t) = (2z/w, (2-w)/w) with w = 1 + |z|^2 - i t,
//                    sending 0 to (0,1); the antipode (0,-1) is the pole.
//  * sphere distance d(xi,eta) = sqrt(2 |1 - <xi,eta>|), Hermitian <.,.>.
//
// Re-centering a chart at y uses the unitary with rows (-y2, y1), (y1*, y2*),
// which maps y to (0,1); unitaries are exact automorphisms of the sphere's
// CR structure, so chart transitions introduce no truncation error.

#include <array>
#include <complex>

namespace crcurv {

using cd = std::complex<double>;

struct HPoint {
  cd z{0.0, 0.0};
  double t = 0.0;
};

double gauge_norm(const HPoint& p);
HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint group_inv(const HPoint& p);
// Left translation of q by p (the group product; alias named for call sites
// that read better as a translation).
inline HPoint group_translate(const HPoint& p, const HPoint& q) { return group_mul(p, q); }
// Left-invariant gauge distance |p^{-1} q|.
double gauge_dist(const HPoint& p, const HPoint& q);

struct SpherePoint {
  cd xi1{0.0, 0.0};
  cd xi2{0.0, 0.0};

  // Construct from components, renormalizing. Rejects inputs farther than
  // norm_tol from the unit sphere.
  static SpherePoint from(cd xi1, cd xi2, double norm_tol = 1e-10);
  // Ambient real coordinates (Re xi1, Im xi1, Re xi2, Im xi2).
  std::array<double, 4> ambient() const;
  static SpherePoint from_ambient(const std::array<double, 4>& x, double norm_tol = 1e-10);
};

// Hermitian inner product xi1 conj(eta1) + xi2 conj(eta2).
cd hermitian_inner(const SpherePoint& a, const SpherePoint& b);

// CR-invariant distance sqrt(2 |1 - <a,b>|). The real part of 1 - <a,b> is
// evaluated as |a-b|^2/2 to avoid cancellation for nearby points.
double cr_distance(const SpherePoint& a, const SpherePoint& b);

SpherePoint cayley(const HPoint& p);
// Inverse chart map; the pole (0,-1) and a small neighbourhood around it
// (|1 + xi2| < pole_tol) are outside the chart.
HPoint cayley_inv(const SpherePoint& xi, double pole_tol = 1e-12);

// 2x2 complex unitary acting on C^2, stored by rows.
struct Unitary2 {
  cd a{1.0, 0.0}, b{0.0, 0.0};
  cd c{0.0, 0.0}, d{1.0, 0.0};

  SpherePoint apply(const SpherePoint& x) const;
  Unitary2 inverse() const;  // conjugate transpose
};

// Deterministic unitary sending y to the chart center (0,1). `phase` rotates
// the first row and selects a different but equally valid chart; charts with
// different phases are used to test chart independence.
Unitary2 recenter_unitary(const SpherePoint& y, double phase = 0.0);

// A chart of S^3 minus a pole, modeled on H^1: x -> cayley_inv(U x).
struct Chart {
  Unitary2 u;

  static Chart centered_at(const SpherePoint& y, double phase = 0.0);
  static Chart identity();

  HPoint to_chart(const SpherePoint& x) const;
  SpherePoint from_chart(const HPoint& p) const;
  SpherePoint center() const;  // preimage of (0,1)
  // |w| = |1 + |z|^2 - i t| for the chart representative of x; the conformal
  // factor of the chart is kappa / |w|.
  static double abs_w(const HPoint& p);
};

}  // namespace crcurv
