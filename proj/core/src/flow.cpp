#include "crcurv/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "crcurv/errors.hpp"

namespace crcurv {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// y' = -M y.
void deriv(const std::vector<double>& m, const std::vector<double>& y, std::vector<double>& dy) {
  const std::size_t p = y.size();
  for (std::size_t r = 0; r < p; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < p; ++c) s += m[r * p + c] * y[c];
    dy[r] = -s;
  }
}

// Quintic Hermite interpolant between two accepted states `dt` apart. The
// flow is linear, so the endpoint first and second derivatives (-M y, M^2 y)
// are exact and the interpolant tracks the integrator's own accuracy.
struct HermiteSeg {
  std::vector<double> a, b, da, db, ca, cb;
  double dt = 0.0;

  HermiteSeg() = default;
  HermiteSeg(const std::vector<double>& m, std::vector<double> av, std::vector<double> bv,
             double span)
      : a(std::move(av)), b(std::move(bv)), dt(span) {
    const std::size_t p = a.size();
    da.resize(p), db.resize(p), ca.resize(p), cb.resize(p);
    deriv(m, a, da);
    deriv(m, b, db);
    deriv(m, da, ca);
    deriv(m, db, cb);
  }

  void eval(double u, std::vector<double>& out) const {
    const std::size_t p = a.size();
    out.resize(p);
    if (!(dt > 0.0)) {
      out = a;
      return;
    }
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    const double h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    const double h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    const double h3 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    const double h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    const double h5 = 0.5 * u3 - u4 + 0.5 * u5;
    for (std::size_t r = 0; r < p; ++r)
      out[r] = h0 * a[r] + h3 * b[r] + dt * (h1 * da[r] + h4 * db[r]) +
               dt * dt * (h2 * ca[r] + h5 * cb[r]);
  }
};

// Cash-Karp tableau.
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
    {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
    {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096},
};
constexpr double kB5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
constexpr double kB4[6] = {2825.0 / 27648, 0,           18575.0 / 48384,
                           13525.0 / 55296, 277.0 / 14336, 1.0 / 4};

}  // namespace

const char* flow_outcome_name(FlowOutcome o) {
  switch (o) {
    case FlowOutcome::converged_to_infinity:
      return "converged_to_infinity";
    case FlowOutcome::exited:
      return "exited";
    case FlowOutcome::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

std::vector<double> alpha_equilibrium(const std::vector<double>& k_values) {
  if (k_values.empty()) fail(Errc::input, "alpha_equilibrium: no K values");
  double inv_sum = 0.0;
  for (double k : k_values) {
    if (!(k > 0.0)) fail(Errc::input, "alpha_equilibrium: K values must be positive");
    inv_sum += 1.0 / k;
  }
  std::vector<double> alpha;
  alpha.reserve(k_values.size());
  for (double k : k_values) alpha.push_back(std::sqrt(1.0 / (k * inv_sum)));
  return alpha;
}

std::vector<double> alpha_equilibrium(const AbstractCriticalData& data,
                                      const std::vector<int>& tuple) {
  data.validate();
  std::vector<double> ks;
  for (int i : tuple) {
    if (i < 0 || i >= static_cast<int>(data.points.size()))
      fail(Errc::input, "alpha_equilibrium: tuple index out of range");
    ks.push_back(data.points[static_cast<std::size_t>(i)].k);
  }
  return alpha_equilibrium(ks);
}

TrajectoryRecord integrate(const InteractionMatrix& im, const std::vector<double>& lambda0,
                           const FlowConfig& cfg) {
  if (cfg.samples < 2) fail(Errc::input, "flow needs at least two output samples");
  if (!(cfg.lambda0 > 0.0) || !(cfg.s_max > 0.0) || !(cfg.converge_norm > 0.0) ||
      !(cfg.exit_factor > 1.0))
    fail(Errc::input, "malformed flow configuration");
  const std::size_t p = im.points.size();
  if (lambda0.size() != p) fail(Errc::input, "flow start dimension does not match the matrix");
  for (double v : lambda0)
    if (!(v > 0.0) || !std::isfinite(v))
      fail(Errc::input, "flow start must be strictly positive");

  TrajectoryRecord rec;
  rec.points = im.points;
  rec.rho = least_eigenvalue(im);

  std::vector<double> y = lambda0;
  const double n0 = norm2(y);
  const double exit_norm = cfg.exit_factor * n0;

  // Accepted steps, kept for resampling onto the output grid.
  std::vector<double> path_s{0.0};
  std::vector<std::vector<double>> path_y{y};

  std::vector<double> k[6], yt(p), err(p), y5(p);
  for (auto& stage : k) stage.assign(p, 0.0);

  double s = 0.0;
  double h = 1e-3;
  FlowOutcome outcome = FlowOutcome::budget_exhausted;
  const int max_steps = 2000000;
  for (int step = 0; step < max_steps && s < cfg.s_max; ++step) {
    h = std::min(h, cfg.s_max - s);
    // Six stages.
    deriv(im.m, y, k[0]);
    for (int st = 1; st < 6; ++st) {
      for (std::size_t r = 0; r < p; ++r) {
        double acc = y[r];
        for (int q = 0; q < st; ++q) acc += h * kA[st][q] * k[q][r];
        yt[r] = acc;
      }
      deriv(im.m, yt, k[st]);
    }
    double err_ratio = 0.0;
    for (std::size_t r = 0; r < p; ++r) {
      double v5 = y[r], v4 = y[r];
      for (int q = 0; q < 6; ++q) {
        v5 += h * kB5[q] * k[q][r];
        v4 += h * kB4[q] * k[q][r];
      }
      y5[r] = v5;
      const double tol = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[r]), std::abs(v5));
      err_ratio = std::max(err_ratio, std::abs(v5 - v4) / tol);
    }
    if (err_ratio <= 1.0) {
      const double n = norm2(y5);
      const bool crossed_down = n <= cfg.converge_norm;
      const bool crossed_up = n >= exit_norm;
      if (crossed_down || crossed_up) {
        // The threshold was passed inside this step: bisect the interpolant
        // so s_end and the terminal state sit on the crossing itself instead
        // of overshooting by up to one step.
        const double target = crossed_down ? cfg.converge_norm : exit_norm;
        const HermiteSeg segment(im.m, y, y5, h);
        double lo = 0.0, hi = 1.0;
        std::vector<double> mid(p);
        for (int it = 0; it < 60; ++it) {
          const double um = 0.5 * (lo + hi);
          segment.eval(um, mid);
          const double nm = norm2(mid);
          const bool past = crossed_down ? nm <= target : nm >= target;
          (past ? hi : lo) = um;
        }
        segment.eval(hi, mid);
        s += hi * h;
        y = mid;
        path_s.push_back(s);
        path_y.push_back(y);
        outcome = crossed_down ? FlowOutcome::converged_to_infinity : FlowOutcome::exited;
        break;
      }
      s += h;
      y = y5;
      path_s.push_back(s);
      path_y.push_back(y);
    }
    const double grow = err_ratio > 0.0 ? 0.9 * std::pow(err_ratio, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
    if (!(h > 0.0) || !std::isfinite(h))
      fail(Errc::internal, "flow step size collapsed at s = " + fmt_g(s));
  }
  rec.outcome = outcome;
  rec.s_end = s;
  rec.terminal_norm = norm2(y);

  // Uniform resampling over the realized span through the same interpolant.
  rec.samples.reserve(static_cast<std::size_t>(cfg.samples));
  const double span = path_s.back();
  std::size_t seg = 0;
  std::size_t cached_seg = path_s.size();  // sentinel: nothing cached yet
  HermiteSeg segment;
  for (int i = 0; i < cfg.samples; ++i) {
    const double si = span * static_cast<double>(i) / (cfg.samples - 1);
    while (seg + 2 < path_s.size() && path_s[seg + 1] < si) ++seg;
    const std::size_t hi = seg + 1 < path_s.size() ? seg + 1 : seg;
    const double s0 = path_s[seg], s1 = path_s[hi];
    if (cached_seg != seg) {
      segment = HermiteSeg(im.m, path_y[seg], path_y[hi], s1 - s0);
      cached_seg = seg;
    }
    FlowState st;
    st.s = si;
    segment.eval(s1 > s0 ? (si - s0) / (s1 - s0) : 0.0, st.lambda_inv);
    rec.samples.push_back(std::move(st));
  }
  return rec;
}

TrajectoryRecord integrate(const AbstractCriticalData& data, const std::vector<int>& tuple,
                           const FlowConfig& cfg) {
  const InteractionMatrix im = build_matrix(data, tuple);
  return integrate(im, std::vector<double>(tuple.size(), cfg.lambda0), cfg);
}

TrajectoryRecord classify_tuple(const AbstractCriticalData& data, const std::vector<int>& tuple,
                                const FlowConfig& cfg) {
  TrajectoryRecord rec = integrate(data, tuple, cfg);
  const FlowOutcome expected =
      rec.rho > 0.0 ? FlowOutcome::converged_to_infinity : FlowOutcome::exited;
  if (rec.outcome == FlowOutcome::budget_exhausted)
    fail(Errc::consistency, "flow budget exhausted before a verdict (rho = " + fmt_g(rec.rho) +
                                ", |Lambda| = " + fmt_g(rec.terminal_norm) + ")");
  if (rec.outcome != expected)
    fail(Errc::consistency,
         "flow outcome disagrees with the spectral verdict (rho = " + fmt_g(rec.rho) + ")");
  return rec;
}

}  // namespace crcurv
