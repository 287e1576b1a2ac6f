#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "crcurv/curvature.hpp"
#include "crcurv/geometry.hpp"
#include "crcurv/heisenberg.hpp"

namespace crcurv {

// Run-wide normalization constants. Everything downstream (Green's function,
// interaction estimates, the functional) is expressed through these, so they
// are measured once at startup instead of being hard-coded: c1 is solved from
// the defining identity of the standard profile, the Dirac mass of the
// fundamental singularity is obtained by quadrature, and kappa / c_G / the
// scalar invariants follow.  compute() throws Errc::calibration when any of
// the internal consistency checks fail.
struct Calibration {
  ContactConvention convention{};

  double c1 = 0.0;           // amplitude of the standard profile c1/|w|
  double c1_residual = 0.0;  // max relative defect of the profile identity over the sample
  double dirac_mass = 0.0;   // mass of the fundamental singularity gauge^-2
  double kappa = 0.0;        // conformal amplitude of the round contact form
  double c_G = 0.0;          // Green's constant: G(a,x) = c_G / d(a,x)^2
  double quarter_R = 0.0;    // value of the conformal operator on the constant solution
  double S = 0.0;            // fourth-power integral of a standard bubble
  double S_gap = 0.0;
  double c2 = 0.0;           // third-power integral of a standard bubble
  double c2_gap = 0.0;
  double mass_gap = 0.0;
  double chart_ratio = 0.0;  // small-gauge limit of chart distance / gauge

  // (name, how it was obtained) in a stable order, for reports.
  std::vector<std::pair<std::string, std::string>> provenance;

  // level = nodes per quadrature axis at the fine refinement.
  static Calibration compute(int level = 64);
};

// Solves the amplitude c from -(X^2+Y^2)(c/|w|) = (c/|w|)^3 at an interior
// point.  Throws Errc::calibration if the sign convention makes the ratio
// negative.
double calibrate_c1();

// Whole-space quadrature of the fourth and third powers of the standard
// profile against the contact volume; the S and c2 entries of Calibration.
std::pair<QuadResult, QuadResult> constants_S_c2(double c1, int level = 64,
                                                 const ContactConvention& conv = {});

// The flat profile c1 * lambda / |w_lambda|, |w_lambda|^2 =
// (1 + lambda^2 |z|^2)^2 + lambda^4 t^2, with analytic second derivatives.
ScalarFieldH bubble_field(double c1, double lambda);

// A concentration profile on the sphere: center, scale, and the chart that
// moves the center to the chart origin.
struct Bubble {
  SpherePoint a;
  double lambda = 1.0;
  Chart chart;

  static Bubble make(const SpherePoint& a, double lambda, double phase = 0.0);
};

// Chart-side evaluation: pulls x through the bubble's own chart and divides
// the flat profile by the conformal factor.  Throws Errc::domain when x is
// too close to the chart pole.
double delta(const Calibration& cal, const Bubble& b, const SpherePoint& x);

// Globally smooth closed form of the same function; solves the critical
// equation on the sphere exactly and never sees a chart pole.
double delta_exact(const Calibration& cal, const Bubble& b, const SpherePoint& x);

// Bubble truncated to a metric ball: the profile is kept on d <= r/2, tapers
// with a quintic ramp, and vanishes beyond d = r.
struct TruncatedBubble {
  Bubble bubble;
  double r = 0.5;
};

// The taper value at the given center distance (1 inside, 0 outside).
double cutoff_chi(const TruncatedBubble& tb, double distance);

double delta_hat(const Calibration& cal, const TruncatedBubble& tb, const SpherePoint& x);

// lambda * (delta_exact - delta_hat): vanishes at the center, approaches the
// Green's function away from the ball as lambda grows.
double h_value(const Calibration& cal, const TruncatedBubble& tb, const SpherePoint& x);

struct HProfileSample {
  double distance = 0.0;  // center distance of the sample point
  double h = 0.0;
};
using HProfile = std::vector<HProfileSample>;

// Radial trace of h_value along a fixed great-circle direction, log-spaced
// from well inside the taper to the far side of the sphere.
HProfile h_profile(const Calibration& cal, const TruncatedBubble& tb, int samples = 64);

// Interaction gauge between two concentration profiles:
// 1 / (li/lj + lj/li + li*lj*d^2).
double eps_ij(const Bubble& bi, const Bubble& bj);

struct BubbleConfiguration {
  std::vector<double> alpha;
  std::vector<Bubble> bubbles;

  // Deviation from the balance relations alpha_i^2 K(a_i) = const, as the
  // max relative spread; 0 for a single bubble.
  double balance_residual(const CurvatureFunction& K) const;
};

// Integral of f over the sphere against the contact volume.  The domain is
// split by a smooth partition of unity subordinate to the given centers; each
// piece is pulled to the chart of its center and integrated in gauge-polar
// coordinates with a radial panel ladder sized by `scales` (concentration
// scales; use 1 for broad integrands).  Returns the fine value together with
// the value at half the node count, as a convergence certificate.
QuadResult integrate_sphere(const Calibration& cal,
                            const std::function<double(const SpherePoint&)>& f,
                            const std::vector<SpherePoint>& centers,
                            const std::vector<double>& scales, int level = 64);

// <delta_j^3, delta_i> against the contact volume (ordered: the cube sits on
// bj).  Equals the contact inner product of the two exact profiles.
QuadResult inner_product_bubbles(const Calibration& cal, const Bubble& bi, const Bubble& bj,
                                 int level = 64);

// J(u) = (integral of |grad u|^2, via the critical equation) / (integral of
// K u^4)^{1/2} evaluated on u = sum alpha_i delta_i.
QuadResult functional_J(const Calibration& cal, const BubbleConfiguration& cfg,
                        const CurvatureFunction& K, int level = 64);

// Relative defect of the reproduction identity u(a) = int G(a,.) u^3 dv for
// u = delta_exact(b): quadrature vs the closed-form value at a.
double green_identity_gap(const Calibration& cal, const SpherePoint& a, const Bubble& b,
                          int level = 64);

// Same identity for the constant solution: int G(a,.) dv * (c1/kappa)^2 = 1.
double green_identity_gap_const(const Calibration& cal, const SpherePoint& a, int level = 64);

struct PairInteraction {
  int i = 0;
  int j = 0;
  double eps = 0.0;    // eps_ij
  double inner = 0.0;  // measured <delta_j^3, delta_i>, symmetrized
  double c_ij = 0.0;   // inner / eps
};

struct ExpansionReport {
  double measured_J = 0.0;
  double predicted = 0.0;     // gamma1 / sqrt(beta1) * (1 - interaction correction)
  double gamma1 = 0.0;        // S * sum alpha_i^2
  double beta1 = 0.0;         // S * sum alpha_i^4 K(a_i)
  std::vector<PairInteraction> pairs;
  double relative_gap = 0.0;  // |measured - predicted| / predicted
  int level = 0;
};

// Measures J on the configuration and compares it against the second-order
// prediction built from the measured pair interactions.
ExpansionReport verify_expansion(const Calibration& cal, const BubbleConfiguration& cfg,
                                 const CurvatureFunction& K, int level = 64);

}  // namespace crcurv
