#include "crcurv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crcurv/errors.hpp"
#include "crcurv/heisenberg.hpp"
#include "crcurv/numerics.hpp"

namespace crcurv {
namespace {

using V4 = std::array<double, 4>;

double dot4(const V4& a, const V4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm4(const V4& a) { return std::sqrt(dot4(a, a)); }

V4 normalized4(V4 a) {
  const double n = norm4(a);
  for (double& c : a) c /= n;
  return a;
}

// Deterministic orthonormal basis of the tangent space at unit x: coordinate
// axes (the one most aligned with x dropped), Gram-Schmidt projected.
std::array<V4, 3> tangent_basis(const V4& x) {
  int skip = 0;
  for (int k = 1; k < 4; ++k)
    if (std::abs(x[k]) > std::abs(x[skip])) skip = k;
  std::array<V4, 3> e{};
  int idx = 0;
  for (int k = 0; k < 4; ++k) {
    if (k == skip) continue;
    V4 v{};
    v[k] = 1.0;
    const double vx = dot4(v, x);
    for (int c = 0; c < 4; ++c) v[c] -= vx * x[c];
    for (int j = 0; j < idx; ++j) {
      const double ve = dot4(v, e[j]);
      for (int c = 0; c < 4; ++c) v[c] -= ve * e[j][c];
    }
    e[idx++] = normalized4(v);
  }
  return e;
}

struct TangentData {
  std::array<double, 3> grad{};
  std::array<double, 9> hess{};  // row-major, symmetric
  double grad_norm = 0.0;
};

// Gradient and Hessian of K restricted to the sphere, in the basis e at x.
// The curvature correction -(x . grad) I is the exact second-fundamental-form
// term of the unit sphere, valid away from critical points too.
TangentData tangent_data(const CurvatureFunction& K, const V4& x, const std::array<V4, 3>& e) {
  const V4 g = K.ambient_grad(x);
  const std::array<double, 16> h = K.ambient_hess(x);
  const double xg = dot4(x, g);
  TangentData out;
  for (int i = 0; i < 3; ++i) out.grad[i] = dot4(e[i], g);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double hij = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) hij += e[i][r] * h[4 * r + c] * e[j][c];
      out.hess[3 * i + j] = hij - (i == j ? xg : 0.0);
    }
  }
  // symmetrize against round-off so the eigensolver's check cannot trip
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double s = 0.5 * (out.hess[3 * i + j] + out.hess[3 * j + i]);
      out.hess[3 * i + j] = s;
      out.hess[3 * j + i] = s;
    }
  out.grad_norm = std::sqrt(out.grad[0] * out.grad[0] + out.grad[1] * out.grad[1] +
                            out.grad[2] * out.grad[2]);
  return out;
}

struct Candidate {
  V4 x{};
  double grad_norm = 0.0;
};

bool newton_search(const CurvatureFunction& K, V4 x, const CriticalPointConfig& cfg,
                   Candidate* out) {
  for (int it = 0; it < cfg.max_newton_iters; ++it) {
    const auto e = tangent_basis(x);
    const TangentData td = tangent_data(K, x, e);
    if (td.grad_norm < cfg.grad_tol) {
      out->x = x;
      out->grad_norm = td.grad_norm;
      return true;
    }
    std::vector<double> a(td.hess.begin(), td.hess.end());
    std::vector<double> b = {-td.grad[0], -td.grad[1], -td.grad[2]};
    std::vector<double> s;
    double mu = 0.0;
    double hmax = 0.0;
    for (double v : td.hess) hmax = std::max(hmax, std::abs(v));
    while (!num::solve_dense(a, b, 3, s)) {
      // singular Hessian model: Levenberg-style bump, growing until solvable
      mu = (mu == 0.0) ? 1e-8 + 1e-6 * hmax : 10.0 * mu;
      if (mu > 1e12 * std::max(1.0, hmax)) return false;
      a.assign(td.hess.begin(), td.hess.end());
      a[0] += mu;
      a[4] += mu;
      a[8] += mu;
    }
    double slen = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    if (!std::isfinite(slen)) return false;
    if (slen > 0.5) {
      const double f = 0.5 / slen;
      for (double& v : s) v *= f;
    }
    for (int c = 0; c < 4; ++c) x[c] += s[0] * e[0][c] + s[1] * e[1][c] + s[2] * e[2][c];
    x = normalized4(x);
  }
  return false;
}

}  // namespace

double sublaplacian_K_at(const CurvatureFunction& K, const SpherePoint& y, double kappa,
                         double phase, double grad_check_tol) {
  if (kappa <= 0.0) fail(Errc::input, "sublaplacian_K_at requires a positive kappa");
  const V4 x = y.ambient();
  const V4 g = K.ambient_grad(x);
  const double xg = dot4(x, g);
  V4 gt{};
  for (int c = 0; c < 4; ++c) gt[c] = g[c] - xg * x[c];
  if (!(norm4(gt) <= grad_check_tol)) {
    std::ostringstream os;
    os << "sublaplacian_K_at called at a non-critical point (|grad| = " << norm4(gt)
       << ", tolerance " << grad_check_tol << ")";
    fail(Errc::input, os.str());
  }
  const Chart chart = Chart::centered_at(y, phase);
  const auto field = [&](const HPoint& p) { return K.value(chart.from_chart(p)); };
  // lap is the flat positive operator -(X^2+Y^2); the criterion formulas use
  // the analyst sign, hence the leading minus.
  const double lap0 = sublaplacian_H_fd(field, HPoint{});
  return -lap0 / (kappa * kappa);
}

std::vector<CriticalPointRecord> find_critical_points(const CurvatureFunction& K, double kappa,
                                                      const CriticalPointConfig& cfg,
                                                      std::vector<std::string>* warnings) {
  if (cfg.multistart < 1) fail(Errc::input, "multistart count must be positive");
  std::vector<Candidate> found;
  for (int i = 0; i < cfg.multistart; ++i) {
    const SpherePoint start = quasi_random_sphere_point(static_cast<std::uint64_t>(i), cfg.seed);
    Candidate c;
    if (newton_search(K, start.ambient(), cfg, &c)) found.push_back(c);
  }
  // dedup: smallest gradient norm wins inside each cluster; ordering made
  // deterministic before the sweep. Clusters are measured in the ambient
  // euclidean metric: the cr distance grows like the square root of the
  // euclidean one transversally to the contact planes, so two converged
  // copies of the same point (euclidean-tiny apart) can sit cr-far.
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
    return a.x < b.x;
  });
  std::vector<Candidate> kept;
  for (const Candidate& c : found) {
    bool dup = false;
    for (const Candidate& k : kept) {
      double d2 = 0.0;
      for (int i = 0; i < 4; ++i) d2 += (c.x[i] - k.x[i]) * (c.x[i] - k.x[i]);
      if (std::sqrt(d2) < cfg.dedup_radius) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(c);
  }

  std::vector<CriticalPointRecord> records;
  for (const Candidate& c : kept) {
    const SpherePoint loc = SpherePoint::from_ambient(c.x);
    const auto e = tangent_basis(c.x);
    const TangentData td = tangent_data(K, c.x, e);
    CriticalPointRecord rec;
    rec.location = loc;
    rec.k_value = K.value(loc);
    rec.grad_norm = td.grad_norm;
    const std::vector<double> eigs =
        num::jacobi_eigenvalues(std::vector<double>(td.hess.begin(), td.hess.end()), 3);
    for (int i = 0; i < 3; ++i) rec.hessian_eigs[i] = eigs[static_cast<std::size_t>(i)];
    double emax = 0.0, emin_abs = std::abs(eigs[0]);
    for (double v : eigs) {
      emax = std::max(emax, std::abs(v));
      emin_abs = std::min(emin_abs, std::abs(v));
    }
    rec.morse_index = static_cast<int>(std::count_if(
        eigs.begin(), eigs.end(), [](double v) { return v < 0.0; }));
    rec.degenerate = emax == 0.0 || emin_abs < cfg.degeneracy_tol * emax;
    if (rec.degenerate) {
      std::ostringstream os;
      os << "degenerate critical point at xi1 = (" << loc.xi1.real() << ", " << loc.xi1.imag()
         << "), xi2 = (" << loc.xi2.real() << ", " << loc.xi2.imag() << "): K = " << rec.k_value
         << ", tangent Hessian spectrum {" << eigs[0] << ", " << eigs[1] << ", " << eigs[2]
         << "} fails the nondegeneracy condition";
      fail(Errc::c0_violation, os.str());
    }
    rec.sublap_K = sublaplacian_K_at(K, loc, kappa);
    rec.a_value = 0.0;  // model sphere: vanishing regular part
    rec.kplus_margin = -rec.sublap_K / (3.0 * rec.k_value) - 2.0 * rec.a_value;
    rec.kplus_member = rec.kplus_margin > 0.0;
    records.push_back(rec);
  }

  std::sort(records.begin(), records.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              if (a.k_value != b.k_value) return a.k_value > b.k_value;
              return a.location.ambient() < b.location.ambient();
            });
  for (std::size_t i = 0; i < records.size(); ++i)
    records[i].label = "y" + std::to_string(i + 1);

  if (records.size() < 2 && warnings != nullptr)
    warnings->push_back(
        "suspicious coverage: fewer than 2 critical points found (a Morse function "
        "on the sphere has at least a maximum and a minimum)");
  return records;
}

double greens_function(const GreenData& g, const SpherePoint& a, const SpherePoint& x,
                       double singular_tol) {
  if (g.c_G <= 0.0) fail(Errc::input, "Green normalization c_G must be positive");
  const double d = cr_distance(a, x);
  if (d < singular_tol) fail(Errc::domain, "Green's function evaluated on its diagonal singularity");
  return g.c_G / (d * d);
}

C0Verdict check_C0(const std::vector<CriticalPointRecord>& records, double margin_tol) {
  C0Verdict v;
  if (records.empty()) {
    v.violations.push_back("no critical points");
    return v;
  }
  for (const CriticalPointRecord& r : records) {
    if (r.degenerate)
      v.violations.push_back(r.label + ": degenerate Hessian");
    if (!(std::abs(r.kplus_margin) > margin_tol))
      v.violations.push_back(r.label + ": membership margin " + std::to_string(r.kplus_margin) +
                             " is within tolerance of zero");
  }
  v.pass = v.violations.empty();
  return v;
}

}  // namespace crcurv
