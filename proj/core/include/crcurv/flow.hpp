#pragma once

// Reduced concentration dynamics over a tuple of admissible points: the
// inverse scales Lambda evolve by dLambda/ds = -M(tau) Lambda, so the tuple
// is an attractor at infinity exactly when the least eigenvalue of M is
// positive. Trajectories provide an independent dynamical cross-check of the
// spectral verdicts.

#include <vector>

#include "crcurv/criterion.hpp"

namespace crcurv {

struct FlowState {
  double s = 0.0;
  std::vector<double> lambda_inv;  // Lambda components (inverse scales)
};

enum class FlowOutcome {
  converged_to_infinity,  // |Lambda| fell below the convergence threshold
  exited,                 // |Lambda| grew past the exit threshold
  budget_exhausted,       // s reached s_max undecided
};

const char* flow_outcome_name(FlowOutcome o);

struct TrajectoryRecord {
  std::vector<int> points;  // tuple driving the flow
  std::vector<FlowState> samples;
  FlowOutcome outcome = FlowOutcome::budget_exhausted;
  double terminal_norm = 0.0;
  double s_end = 0.0;
  double rho = 0.0;  // least eigenvalue of the driving matrix
};

struct FlowConfig {
  double lambda0 = 1e-2;      // initial value of every Lambda component
  double s_max = 1e5;
  double converge_norm = 1e-6;
  double exit_factor = 10.0;  // exit when |Lambda| > exit_factor * |Lambda(0)|
  int samples = 200;          // states reported per trajectory
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
};

// Balance weights alpha_i proportional to 1/sqrt(K_i), normalized so that
// sum alpha_i^2 = 1.
std::vector<double> alpha_equilibrium(const std::vector<double>& k_values);
std::vector<double> alpha_equilibrium(const AbstractCriticalData& data,
                                      const std::vector<int>& tuple);

// Integrates the linear flow with an adaptive embedded Runge-Kutta pair
// (Cash-Karp 4(5)), then resamples the accepted steps onto a uniform grid of
// cfg.samples states over the realized span. The matrix form starts from an
// arbitrary strictly positive lambda0 (cfg.lambda0 is ignored there); the
// tuple form builds the interaction matrix and starts from the canonical
// all-equal state.
TrajectoryRecord integrate(const InteractionMatrix& m, const std::vector<double>& lambda0,
                           const FlowConfig& cfg = {});
TrajectoryRecord integrate(const AbstractCriticalData& data, const std::vector<int>& tuple,
                           const FlowConfig& cfg = {});

// Runs integrate() and checks the outcome against the spectral verdict:
// rho > 0 must converge to infinity, rho < 0 must exit. Disagreement or an
// exhausted budget is a consistency error.
TrajectoryRecord classify_tuple(const AbstractCriticalData& data, const std::vector<int>& tuple,
                                const FlowConfig& cfg = {});

}  // namespace crcurv
