#pragma once

// Critical-point analysis of a curvature candidate K on S^3, the sublaplacian
// of K at its critical points, and the Green's function of the conformal
// sublaplacian L_theta.
//
// The contact form on the sphere is normalized so that its pullback through
// a Cayley chart is u_C^2 theta_0 with u_C = kappa/|w| (kappa frozen at
// calibration, see bubbles). Two consequences used here:
//  * at a critical point y of K (gradient cross-terms vanish), the
//    sublaplacian reduces to a chart computation,
//      Delta_theta K(y) = -kappa^{-2} * lap(K o chart_y)(0),
//    where lap is the flat-model operator of heisenberg.hpp; the leading
//    minus sign converts to the analyst sign convention used by the
//    criterion formulas, under which maxima of K have Delta_theta K < 0;
//  * the Green's function of L_theta is globally
//      G(a,x) = c_G / d(a,x)^2
//    in the CR distance, with vanishing regular part on the model sphere.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crcurv/curvature.hpp"
#include "crcurv/geometry.hpp"

namespace crcurv {

struct CriticalPointRecord {
  SpherePoint location;
  std::string label;                     // y1, y2, ... in descending K order
  double k_value = 0.0;                  // K(y)
  double grad_norm = 0.0;                // tangent gradient norm at convergence
  std::array<double, 3> hessian_eigs{};  // tangent Hessian spectrum, ascending
  int morse_index = 0;                   // negative eigenvalue count
  bool degenerate = false;
  double sublap_K = 0.0;                 // Delta_theta K(y), analyst sign
  double a_value = 0.0;                  // Green regular part A_y (0 here)
  double kplus_margin = 0.0;             // -sublap/(3K) - 2A
  bool kplus_member = false;             // margin > 0
};

struct CriticalPointConfig {
  int multistart = 200;
  std::uint64_t seed = 0;
  double grad_tol = 1e-10;
  double dedup_radius = 1e-5;   // ambient distance below which two points merge
  double degeneracy_tol = 1e-6;  // relative to the largest |eigenvalue|
  int max_newton_iters = 60;
};

// Multistart projected Newton search for the critical points of K, with full
// Morse data and criterion quantities filled in. Records are sorted by
// descending K and labeled y1, y2, ... Throws a c0_violation error if any
// converged point is degenerate. If fewer than two points are found (a Morse
// function on S^3 has at least a max and a min) a coverage warning is pushed
// to `warnings` when provided.
std::vector<CriticalPointRecord> find_critical_points(
    const CurvatureFunction& K, double kappa, const CriticalPointConfig& cfg = {},
    std::vector<std::string>* warnings = nullptr);

// Delta_theta K at a critical point y (analyst sign; see header comment).
// `phase` selects the re-centering chart; results are chart-independent and
// the tests exploit that. Calling this at a non-critical point is an input
// error: the chart reduction is only valid where the gradient vanishes.
double sublaplacian_K_at(const CurvatureFunction& K, const SpherePoint& y, double kappa,
                         double phase = 0.0, double grad_check_tol = 1e-6);

// Green's function data of L_theta. On the model sphere the regular part
// vanishes identically; a nonzero model can be injected for abstract-style
// experiments.
struct GreenData {
  double c_G = 0.0;
  std::function<double(const SpherePoint&)> regular_part;  // empty => 0

  double a_at(const SpherePoint& y) const { return regular_part ? regular_part(y) : 0.0; }
};

// G(a,x) = c_G / d(a,x)^2; symmetric, positive, singular on the diagonal.
double greens_function(const GreenData& g, const SpherePoint& a, const SpherePoint& x,
                       double singular_tol = 1e-9);

struct C0Verdict {
  bool pass = false;
  std::vector<std::string> violations;
};

// Condition check: all points nondegenerate and all membership margins
// bounded away from zero.
C0Verdict check_C0(const std::vector<CriticalPointRecord>& records,
                   double margin_tol = 1e-8);

}  // namespace crcurv
