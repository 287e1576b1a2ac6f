#pragma once

// The counting criterion: admissible critical points, interaction matrices
// over tuples, the index and partial alternating sums, and the existence
// tests built from them. Everything here operates on abstract per-point
// data, so it can be fed either by the analytic sphere pipeline or from a
// hand-written data file.

#include <cstddef>
#include <string>
#include <vector>

namespace crcurv {

// One critical point, reduced to the data the interaction matrix needs.
struct AbstractPoint {
  std::string label;
  double k = 1.0;      // K(y), positive
  double lap_k = 0.0;  // conformal sublaplacian of K at y (analyst sign)
  double a = 0.0;      // regular part of the Green's function at y
  int morse = 0;       // Morse index of K at y, in 0..3
};

// Intersection number (mod 2) attached to one tuple at one index level.
struct MuEntry {
  std::vector<std::string> labels;
  int k = 0;
  int value = 0;
};
using MuTable = std::vector<MuEntry>;

// The interface between the analytic layer and the counting layer: per-point
// invariants plus the symmetric Green matrix between distinct points.
struct AbstractCriticalData {
  std::vector<AbstractPoint> points;
  std::vector<double> green;  // row-major n x n; diagonal entries unused
  MuTable mu;                 // may be empty; used only by the general test

  int point_index(const std::string& label) const;  // -1 when absent
  double green_at(std::size_t i, std::size_t j) const;

  // Structural checks: unique whitespace/comma-free labels, finite values,
  // K > 0, morse in 0..3, green table symmetric (1e-12 relative) with
  // positive off-diagonal entries, mu entries referencing known labels with
  // values in {0, 1}.
  void validate() const;
};

// Indices of the points passing the admissibility inequality
// -lap_k/(3K) - 2A > 0, ascending. A margin inside [-tol, tol] is ambiguous
// and throws Errc::c0_violation.
std::vector<int> k_plus_filter(const AbstractCriticalData& data, double tol = 1e-8);

struct InteractionMatrix {
  std::vector<int> points;  // indices into data.points, strictly increasing
  std::vector<double> m;    // row-major p x p
};

// M_ii = -lap_k_i/(3 K_i^2) - 2 A_i/K_i,  M_ij = -2 G_ij / sqrt(K_i K_j).
InteractionMatrix build_matrix(const AbstractCriticalData& data, const std::vector<int>& tuple);

// Least eigenvalue rho of the matrix. Asymmetry beyond 1e-12 relative to the
// largest entry is a consistency error.
double least_eigenvalue(const InteractionMatrix& im);

struct TupleVerdict {
  std::vector<int> points;  // indices into data.points
  double rho = 0.0;         // least eigenvalue; for pruned tuples an upper bound
  bool in_f1 = false;       // rho > 0
  bool pruned = false;      // ruled out through a facet, matrix never diagonalized
  int iota = 0;             // p - 1 + sum_i (3 - morse_i)
};

// Assigns a verdict to every nonempty unordered subset of the admissible
// points, ordered by (size, lex). A subset is diagonalized only when all of
// its facets lie in F1; eigenvalue interlacing (the least eigenvalue can only
// drop when a point is added) already rules the others out, so they are
// recorded as pruned with the smallest facet rho as an upper bound.
// |rho| <= c1_tol * max(1, max |M entry|) on a diagonalized tuple throws
// Errc::c1_violation; more than max_kplus admissible points is an input
// error (the sweep is exponential).
std::vector<TupleVerdict> enumerate_F1(const AbstractCriticalData& data, double c1_tol = 1e-8,
                                       int max_kplus = 20, double c0_tol = 1e-8);

// iota(tau_p) = p - 1 + sum_i (3 - morse_i).
int index_iota(const AbstractCriticalData& data, const std::vector<int>& tuple);

// Partial alternating sums over F1: entry k is
//   sum over F1 tuples with iota <= k-1 of (-1)^iota,
// for k = 0 .. l_sharp + 1 (entry 0 is 0; the last entry is the total sum).
std::vector<long long> euler_hopf_sums(const AbstractCriticalData& data,
                                       const std::vector<TupleVerdict>& tuples);

struct KVerdict {
  int k = 0;
  long long s_k = 0;          // partial alternating sum at level k
  bool sum_ok = false;        // s_k != 1
  bool level_free = false;    // no F1 tuple of index k (or all their mu vanish)
  bool admissible = false;    // both conditions hold
  long long count_bound = 0;  // |1 - s_k| when admissible
};

struct CriterionReport {
  std::vector<int> k_plus;
  std::vector<TupleVerdict> tuples;  // every enumerated tuple
  int l_sharp = -1;                  // max iota over F1; -1 when F1 is empty
  std::vector<KVerdict> scan;
  bool exists = false;
  int first_k = -1;           // least admissible k; -1 when none
  long long count_bound = 0;  // solution count bound at first_k
  bool used_mu = false;
};

// Tolerances shared by the three existence checks.
struct CriterionTols {
  double c0 = 1e-8;    // membership margin tolerance
  double c1 = 1e-8;    // eigenvalue tolerance, relative to the largest entry
  int max_kplus = 20;  // enumeration cap
};

// Scan k = 0..l_sharp+1 for a level where the partial sum differs from 1 and
// no F1 tuple has index exactly k; the first such level certifies a solution
// of Morse index <= k, with |1 - S_k| as a generic count bound.
CriterionReport check_theorem_main(const AbstractCriticalData& data,
                                   const CriterionTols& tols = {});

// The top level k = l_sharp + 1 alone, where the index condition is vacuous:
// existence iff the total alternating sum differs from 1.
CriterionReport check_corollary(const AbstractCriticalData& data,
                                const CriterionTols& tols = {});

// Like the main test, but a level carrying tuples of index exactly k can
// still pass when every such tuple has a recorded mu value that is even. A
// level with no recorded mu behaves as in the main test; a level where only
// some of its tuples carry a value is an input error (the table engaged but
// is incomplete).
CriterionReport check_theorem_general(const AbstractCriticalData& data,
                                      const CriterionTols& tols = {});

}  // namespace crcurv
