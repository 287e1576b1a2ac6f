#include "crcurv/heisenberg.hpp"

#include <cmath>
#include <numbers>

#include "crcurv/errors.hpp"
#include "crcurv/numerics.hpp"

namespace crcurv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double fd_step(const HPoint& p) { return 1e-4 * std::max(1.0, gauge_norm(p)); }

double sublaplacian_H(const ScalarFieldH& f, const HPoint& p) {
  if (f.has_analytic()) {
    HDeriv2 d = f.deriv2(p);
    double x = p.z.real(), y = p.z.imag();
    double xy2 = x * x + y * y;
    return -(d.fxx + d.fyy + 4.0 * xy2 * d.ftt + 4.0 * y * d.fxt - 4.0 * x * d.fyt);
  }
  return sublaplacian_H_fd(f.value, p);
}

double sublaplacian_H_fd(const std::function<double(const HPoint&)>& f, const HPoint& p) {
  const double h = fd_step(p);
  const double x = p.z.real(), y = p.z.imag(), t = p.t;
  auto at = [&](double dx, double dy, double dt) {
    return f(HPoint{cd{x + dx, y + dy}, t + dt});
  };
  const double f0 = at(0, 0, 0);
  const double fxx = (at(h, 0, 0) - 2.0 * f0 + at(-h, 0, 0)) / (h * h);
  const double fyy = (at(0, h, 0) - 2.0 * f0 + at(0, -h, 0)) / (h * h);
  const double ftt = (at(0, 0, h) - 2.0 * f0 + at(0, 0, -h)) / (h * h);
  const double fxt =
      (at(h, 0, h) - at(h, 0, -h) - at(-h, 0, h) + at(-h, 0, -h)) / (4.0 * h * h);
  const double fyt =
      (at(0, h, h) - at(0, h, -h) - at(0, -h, h) + at(0, -h, -h)) / (4.0 * h * h);
  const double xy2 = x * x + y * y;
  return -(fxx + fyy + 4.0 * xy2 * ftt + 4.0 * y * fxt - 4.0 * x * fyt);
}

double QuadResult::gap() const {
  return std::abs(value - coarse) / std::max(1.0, std::abs(value));
}

namespace {

// Gauge-polar integral of f * rho^3 over rho in [0, inf) (compactified),
// phi in [0, pi], alpha periodic, optionally translated so that integration
// runs over {center . q}. radius < 0 means the whole group.
double polar_integral(const HPoint* center, double radius,
                      const std::function<double(const HPoint&)>& f, int n,
                      double volume_factor) {
  const auto& rs = num::gauss_legendre(n);   // radial (in s or rho)
  const auto& ps = num::gauss_legendre(n);   // polar angle phi
  const int na = n;                          // periodic trapezoid in alpha
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double rho, drho;
    if (radius > 0.0) {
      double s = 0.5 * (rs.nodes[i] + 1.0);
      rho = radius * s;
      drho = radius * 0.5 * rs.weights[i];
    } else {
      double s = 0.5 * (rs.nodes[i] + 1.0);
      rho = s / (1.0 - s);
      drho = 0.5 * rs.weights[i] / ((1.0 - s) * (1.0 - s));
    }
    double radial_w = drho * rho * rho * rho;
    for (int j = 0; j < n; ++j) {
      double phi = 0.5 * (ps.nodes[j] + 1.0) * kPi;
      double wphi = 0.5 * ps.weights[j] * kPi;
      double r2 = rho * rho * std::sin(phi);
      double t = rho * rho * std::cos(phi);
      double r = std::sqrt(std::max(0.0, r2));
      for (int k = 0; k < na; ++k) {
        double alpha = kTwoPi * k / na;
        HPoint q{cd{r * std::cos(alpha), r * std::sin(alpha)}, t};
        HPoint p = center ? group_mul(*center, q) : q;
        total += radial_w * wphi * (kTwoPi / na) * f(p);
      }
    }
  }
  return volume_factor * total;
}

}  // namespace

QuadResult quad_whole_H(const std::function<double(const HPoint&)>& f, int n,
                        const ContactConvention& conv) {
  if (n < 4) fail(Errc::input, "quad_whole_H: refinement level too small");
  QuadResult r;
  r.coarse = polar_integral(nullptr, -1.0, f, n / 2, conv.volume_factor);
  r.value = polar_integral(nullptr, -1.0, f, n, conv.volume_factor);
  return r;
}

QuadResult quad_ball_H(const HPoint& center, double radius,
                       const std::function<double(const HPoint&)>& f, int n,
                       const ContactConvention& conv) {
  if (!(radius > 0.0)) fail(Errc::input, "quad_ball_H: radius must be positive");
  if (n < 4) fail(Errc::input, "quad_ball_H: refinement level too small");
  QuadResult r;
  r.coarse = polar_integral(&center, radius, f, n / 2, conv.volume_factor);
  r.value = polar_integral(&center, radius, f, n, conv.volume_factor);
  return r;
}

}  // namespace crcurv
