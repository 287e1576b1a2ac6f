#pragma once

// The flat model geometry: sublaplacian and quadrature on the Heisenberg
// group H^1. The horizontal frame is X = d/dx + 2y d/dt, Y = d/dy - 2x d/dt;
// the sublaplacian used throughout is
//
//   lap f = -(X^2 + Y^2) f
//         = -( f_xx + f_yy + 4(x^2+y^2) f_tt + 4 y f_xt - 4 x f_yt ),
//
// the sign being fixed by the requirement that the calibrated standard
// bubble delta satisfies lap delta = delta^3 with delta > 0 (see bubbles).
// The contact form dt + 2(x dy - y dx) pairs with this frame and gives the
// volume element theta ^ dtheta = 4 dx dy dt; integrals below carry that
// factor through ContactConvention.

#include <functional>

#include "crcurv/geometry.hpp"

namespace crcurv {

// Frozen orientation/normalization data for the flat model. volume_factor is
// the density of theta ^ dtheta against Lebesgue measure dx dy dt and is a
// closed-form consequence of the horizontal frame above; vectorfield_sign
// records which sign of -(X^2+Y^2) satisfied the bubble identity during
// calibration (+1 means the operator written above was already correct).
struct ContactConvention {
  double volume_factor = 4.0;
  int vectorfield_sign = +1;
};

// Second derivative pack for analytic scalar fields on H^1. Only the
// combinations entering the sublaplacian are required.
struct HDeriv2 {
  double fxx = 0, fyy = 0, ftt = 0, fxt = 0, fyt = 0;
};

// A scalar field on H^1: a value functor plus an optional analytic second
// derivative pack. Fields without analytic derivatives are differentiated
// by central differences with step fd_step(p) = 1e-4 * max(1, |p|).
struct ScalarFieldH {
  std::function<double(const HPoint&)> value;
  std::function<HDeriv2(const HPoint&)> deriv2;  // may be empty

  bool has_analytic() const { return static_cast<bool>(deriv2); }
};

double fd_step(const HPoint& p);

// Conformal factor of the chart: the sphere contact form pulled back through
// the Cayley chart is u_C^2 theta_0 with u_C(p) = kappa / |1 + |z|^2 - i t|.
// kappa is frozen at calibration (see bubbles) and passed in explicitly.
inline double conformal_factor(const HPoint& p, double kappa) {
  return kappa / Chart::abs_w(p);
}

// Sublaplacian -(X^2+Y^2) f at p, analytic when available, otherwise by
// central finite differences.
double sublaplacian_H(const ScalarFieldH& f, const HPoint& p);
// Force the finite-difference path (used for cross-checks).
double sublaplacian_H_fd(const std::function<double(const HPoint&)>& f, const HPoint& p);

// Result of a nested quadrature: the finest value together with the value at
// the previous refinement level, so callers can form a convergence gap.
struct QuadResult {
  double value = 0.0;
  double coarse = 0.0;

  double gap() const;  // |value - coarse| / max(1, |value|)
};

// Quadrature over all of H^1 in gauge-polar coordinates
// (|z|^2, t) = (rho^2 sin phi, rho^2 cos phi), Lebesgue = rho^3 drho dphi dalpha,
// with the radial half-line compactified by rho = s/(1-s). `n` is the number
// of nodes per angular direction at the finest level (the coarse level uses
// n/2); integrands must decay at least like rho^-5 for the compactified tail
// to converge. The volume_factor of `conv` multiplies the result.
QuadResult quad_whole_H(const std::function<double(const HPoint&)>& f, int n,
                        const ContactConvention& conv = {});

// Quadrature over the gauge ball {q : |center^{-1} q| <= radius}.
QuadResult quad_ball_H(const HPoint& center, double radius,
                       const std::function<double(const HPoint&)>& f, int n,
                       const ContactConvention& conv = {});

}  // namespace crcurv
