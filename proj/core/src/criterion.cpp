#include "crcurv/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "crcurv/errors.hpp"
#include "crcurv/numerics.hpp"

namespace crcurv {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string tuple_labels_of(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out;
}

std::string tuple_labels(const AbstractCriticalData& data, const std::vector<int>& tuple) {
  std::vector<std::string> labels;
  for (int i : tuple) labels.push_back(data.points[static_cast<std::size_t>(i)].label);
  return tuple_labels_of(labels);
}

void check_tuple_indices(const AbstractCriticalData& data, const std::vector<int>& tuple) {
  if (tuple.empty()) fail(Errc::input, "tuple must be nonempty");
  const int n = static_cast<int>(data.points.size());
  int prev = -1;
  for (int i : tuple) {
    if (i < 0 || i >= n) fail(Errc::input, "tuple index out of range");
    if (i <= prev) fail(Errc::input, "tuple indices must be strictly increasing");
    prev = i;
  }
}

double admissibility_margin(const AbstractPoint& pt) {
  return -pt.lap_k / (3.0 * pt.k) - 2.0 * pt.a;
}

}  // namespace

int AbstractCriticalData::point_index(const std::string& label) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].label == label) return static_cast<int>(i);
  return -1;
}

double AbstractCriticalData::green_at(std::size_t i, std::size_t j) const {
  const std::size_t n = points.size();
  if (i >= n || j >= n || i == j) fail(Errc::input, "green_at: bad index pair");
  return green[i * n + j];
}

void AbstractCriticalData::validate() const {
  const std::size_t n = points.size();
  if (n == 0) fail(Errc::input, "abstract data has no points");
  std::set<std::string> seen;
  for (const AbstractPoint& pt : points) {
    if (pt.label.empty() || pt.label.find_first_of(" \t,") != std::string::npos)
      fail(Errc::input, "point label '" + pt.label + "' is empty or contains whitespace/comma");
    if (!seen.insert(pt.label).second)
      fail(Errc::input, "duplicate point label '" + pt.label + "'");
    if (!std::isfinite(pt.k) || !std::isfinite(pt.lap_k) || !std::isfinite(pt.a))
      fail(Errc::input, "non-finite value at point '" + pt.label + "'");
    if (!(pt.k > 0.0)) fail(Errc::input, "K must be positive at point '" + pt.label + "'");
    if (pt.morse < 0 || pt.morse > 3)
      fail(Errc::input, "morse index out of range 0..3 at point '" + pt.label + "'");
  }
  if (green.size() != n * n)
    fail(Errc::input, "green table size does not match the point count");
  double biggest = 0.0;
  for (double g : green) {
    if (!std::isfinite(g)) fail(Errc::input, "non-finite green entry");
    biggest = std::max(biggest, std::abs(g));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gij = green[i * n + j], gji = green[j * n + i];
      if (std::abs(gij - gji) > 1e-12 * std::max(1.0, biggest))
        fail(Errc::input, "green table is not symmetric at (" + points[i].label + "," +
                              points[j].label + ")");
      if (!(gij > 0.0))
        fail(Errc::input, "green value must be positive at (" + points[i].label + "," +
                              points[j].label + ")");
    }
  }
  for (const MuEntry& e : mu) {
    if (e.labels.empty()) fail(Errc::input, "mu entry with no labels");
    std::set<std::string> tup;
    for (const std::string& l : e.labels) {
      if (point_index(l) < 0) fail(Errc::input, "mu entry references unknown label '" + l + "'");
      if (!tup.insert(l).second)
        fail(Errc::input, "mu entry repeats label '" + l + "'");
    }
    if (e.k < 0) fail(Errc::input, "mu entry has negative level");
    if (e.value != 0 && e.value != 1)
      fail(Errc::input, "mu value must be 0 or 1 for tuple (" + tuple_labels_of(e.labels) + ")");
  }
}

std::vector<int> k_plus_filter(const AbstractCriticalData& data, double tol) {
  data.validate();
  std::vector<int> out;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const double margin = admissibility_margin(data.points[i]);
    if (std::abs(margin) <= tol)
      fail(Errc::c0_violation, "admissibility margin " + fmt_g(margin) + " at point '" +
                                   data.points[i].label + "' is within +/-" + fmt_g(tol) +
                                   " of zero");
    if (margin > 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

InteractionMatrix build_matrix(const AbstractCriticalData& data, const std::vector<int>& tuple) {
  check_tuple_indices(data, tuple);
  const std::size_t p = tuple.size();
  InteractionMatrix im;
  im.points = tuple;
  im.m.assign(p * p, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    const AbstractPoint& pi = data.points[static_cast<std::size_t>(tuple[r])];
    im.m[r * p + r] = -pi.lap_k / (3.0 * pi.k * pi.k) - 2.0 * pi.a / pi.k;
    for (std::size_t c = r + 1; c < p; ++c) {
      const AbstractPoint& pj = data.points[static_cast<std::size_t>(tuple[c])];
      const double g = data.green_at(static_cast<std::size_t>(tuple[r]),
                                     static_cast<std::size_t>(tuple[c]));
      const double off = -2.0 * g / std::sqrt(pi.k * pj.k);
      im.m[r * p + c] = off;
      im.m[c * p + r] = off;
    }
  }
  return im;
}

double least_eigenvalue(const InteractionMatrix& im) {
  const std::size_t p = im.points.size();
  if (p == 0 || im.m.size() != p * p) fail(Errc::input, "malformed interaction matrix");
  double biggest = 0.0;
  for (double v : im.m) biggest = std::max(biggest, std::abs(v));
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = r + 1; c < p; ++c)
      if (std::abs(im.m[r * p + c] - im.m[c * p + r]) > 1e-12 * std::max(1.0, biggest))
        fail(Errc::consistency, "interaction matrix lost its symmetry");
  const std::vector<double> eigs = num::jacobi_eigenvalues(im.m, static_cast<int>(p));
  return eigs.front();
}

std::vector<TupleVerdict> enumerate_F1(const AbstractCriticalData& data, double c1_tol,
                                       int max_kplus, double c0_tol) {
  const std::vector<int> kp = k_plus_filter(data, c0_tol);
  const int n = static_cast<int>(kp.size());
  if (n > max_kplus)
    fail(Errc::input, "admissible point count " + std::to_string(kp.size()) +
                          " exceeds the enumeration cap " + std::to_string(max_kplus));

  std::vector<TupleVerdict> out;
  // Verdicts of the previous size, keyed by tuple, for facet lookups.
  std::map<std::vector<int>, std::pair<bool, double>> prev;

  std::vector<int> tup, sub;
  for (int p = 1; p <= n; ++p) {
    std::map<std::vector<int>, std::pair<bool, double>> cur;
    std::vector<int> pos(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) pos[static_cast<std::size_t>(i)] = i;
    while (true) {
      tup.clear();
      for (int i : pos) tup.push_back(kp[static_cast<std::size_t>(i)]);

      bool facets_ok = true;
      double bound = std::numeric_limits<double>::infinity();
      sub.assign(tup.size() - 1, 0);
      for (std::size_t drop = 0; drop < tup.size() && tup.size() > 1; ++drop) {
        std::size_t q = 0;
        for (std::size_t r = 0; r < tup.size(); ++r)
          if (r != drop) sub[q++] = tup[r];
        const auto& [facet_in_f1, facet_rho] = prev.at(sub);
        facets_ok = facets_ok && facet_in_f1;
        bound = std::min(bound, facet_rho);
      }

      TupleVerdict v;
      v.points = tup;
      v.iota = index_iota(data, tup);
      if (facets_ok) {
        const InteractionMatrix im = build_matrix(data, tup);
        double biggest = 0.0;
        for (double entry : im.m) biggest = std::max(biggest, std::abs(entry));
        v.rho = least_eigenvalue(im);
        if (std::abs(v.rho) <= c1_tol * std::max(1.0, biggest))
          fail(Errc::c1_violation, "least interaction eigenvalue " + fmt_g(v.rho) +
                                       " for tuple (" + tuple_labels(data, tup) +
                                       ") is too close to zero");
        v.in_f1 = v.rho > 0.0;
      } else {
        // A facet already failed; interlacing caps this tuple's least
        // eigenvalue by every facet's, so record the bound and move on.
        v.rho = bound;
        v.pruned = true;
      }
      cur.emplace(tup, std::make_pair(v.in_f1, v.rho));
      out.push_back(std::move(v));

      int i = p - 1;
      while (i >= 0 && pos[static_cast<std::size_t>(i)] == i + n - p) --i;
      if (i < 0) break;
      ++pos[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < p; ++j)
        pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
    prev = std::move(cur);
  }
  return out;
}

int index_iota(const AbstractCriticalData& data, const std::vector<int>& tuple) {
  check_tuple_indices(data, tuple);
  int iota = static_cast<int>(tuple.size()) - 1;
  for (int i : tuple) iota += 3 - data.points[static_cast<std::size_t>(i)].morse;
  return iota;
}

std::vector<long long> euler_hopf_sums(const AbstractCriticalData& data,
                                       const std::vector<TupleVerdict>& tuples) {
  int l_sharp = -1;
  std::vector<int> iotas;
  for (const TupleVerdict& t : tuples) {
    if (!t.in_f1) continue;
    const int iota = index_iota(data, t.points);  // recompute; cheap and self-checking
    iotas.push_back(iota);
    l_sharp = std::max(l_sharp, iota);
  }
  std::vector<long long> sums(static_cast<std::size_t>(l_sharp + 2), 0);
  for (int k = 0; k <= l_sharp + 1; ++k) {
    long long s = 0;
    for (int iota : iotas)
      if (iota <= k - 1) s += (iota % 2 == 0) ? 1 : -1;
    sums[static_cast<std::size_t>(k)] = s;
  }
  return sums;
}

namespace {

// Finds the recorded mu for `tuple` at level k, or nullptr when absent.
const MuEntry* find_mu(const AbstractCriticalData& data, const std::vector<int>& tuple, int k) {
  std::vector<std::string> want;
  for (int i : tuple) want.push_back(data.points[static_cast<std::size_t>(i)].label);
  std::sort(want.begin(), want.end());
  for (const MuEntry& e : data.mu) {
    if (e.k != k || e.labels.size() != want.size()) continue;
    std::vector<std::string> have = e.labels;
    std::sort(have.begin(), have.end());
    if (have == want) return &e;
  }
  return nullptr;
}

// Condition 2 at level k. Without the mu table the level must carry no F1
// tuple of index k. With it, a fully covered level passes when every
// recorded value is even; an untouched level falls back to the plain test,
// and partial coverage is rejected as an incomplete table.
bool level_is_free(const AbstractCriticalData& data,
                   const std::vector<std::pair<int, const TupleVerdict*>>& f1, int k,
                   bool use_mu) {
  bool all_even = true;
  int total = 0, recorded = 0;
  const TupleVerdict* missing = nullptr;
  for (const auto& [iota, t] : f1) {
    if (iota != k) continue;
    ++total;
    const MuEntry* e = use_mu ? find_mu(data, t->points, k) : nullptr;
    if (e) {
      ++recorded;
      all_even = all_even && e->value % 2 == 0;
    } else {
      missing = t;
    }
  }
  if (recorded == 0) return total == 0;
  if (missing)
    fail(Errc::input, "mu table covers level " + std::to_string(k) +
                          " only partially: no value for tuple (" +
                          tuple_labels(data, missing->points) + ")");
  return all_even;
}

CriterionReport run_scan(const AbstractCriticalData& data, bool use_mu, bool top_only,
                         const CriterionTols& tols) {
  CriterionReport rep;
  rep.used_mu = use_mu;
  rep.k_plus = k_plus_filter(data, tols.c0);
  rep.tuples = enumerate_F1(data, tols.c1, tols.max_kplus, tols.c0);

  std::vector<std::pair<int, const TupleVerdict*>> f1;  // (iota, tuple)
  for (const TupleVerdict& t : rep.tuples) {
    if (!t.in_f1) continue;
    rep.l_sharp = std::max(rep.l_sharp, t.iota);
    f1.emplace_back(t.iota, &t);
  }

  const std::vector<long long> sums = euler_hopf_sums(data, rep.tuples);
  const int k_top = rep.l_sharp + 1;
  for (int k = top_only ? k_top : 0; k <= k_top; ++k) {
    KVerdict v;
    v.k = k;
    v.s_k = sums[static_cast<std::size_t>(k)];
    v.sum_ok = v.s_k != 1;
    v.level_free = level_is_free(data, f1, k, use_mu);
    v.admissible = v.sum_ok && v.level_free;
    if (v.admissible) v.count_bound = std::llabs(1 - v.s_k);
    rep.scan.push_back(v);
    if (v.admissible && rep.first_k < 0) {
      rep.first_k = k;
      rep.count_bound = v.count_bound;
      rep.exists = true;
    }
  }
  return rep;
}

}  // namespace

CriterionReport check_theorem_main(const AbstractCriticalData& data,
                                   const CriterionTols& tols) {
  return run_scan(data, /*use_mu=*/false, /*top_only=*/false, tols);
}

CriterionReport check_corollary(const AbstractCriticalData& data, const CriterionTols& tols) {
  return run_scan(data, /*use_mu=*/false, /*top_only=*/true, tols);
}

CriterionReport check_theorem_general(const AbstractCriticalData& data,
                                      const CriterionTols& tols) {
  return run_scan(data, /*use_mu=*/true, /*top_only=*/false, tols);
}

}  // namespace crcurv
