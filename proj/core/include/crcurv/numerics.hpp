#pragma once

// Small numerical utilities shared across the library: Gauss-Legendre rules,
// low-discrepancy sequences, the cyclic Jacobi eigensolver for small dense
// symmetric matrices, and a handful of scalar helpers. Everything here is
// deterministic: no global state, no threading, no system randomness.

#include <cstdint>
#include <vector>

namespace crcurv::num {

struct QuadRule {
  std::vector<double> nodes;    // in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n nodes. Results are cached per n.
const QuadRule& gauss_legendre(int n);

// Halton sequence value for index i >= 1 in the given prime base.
double halton(std::uint64_t index, std::uint32_t base);

// Inverse of the standard normal CDF (Acklam's rational approximation,
// refined by one Halley step; absolute error below 1e-12 on (0,1)).
double inverse_normal_cdf(double p);

// Quintic smoothstep: 1 on (-inf, lo], 0 on [hi, inf), C^2 monotone between.
double smoothstep_quintic(double x, double lo, double hi);

// Eigenvalues of a dense symmetric n x n matrix (row-major), sorted
// ascending, computed with cyclic Jacobi rotations. `a` is destroyed.
// Asymmetry beyond `sym_tol` relative to the largest entry is an error.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, double sym_tol = 1e-12);

// Solve a dense symmetric positive-size linear system (n <= 4 in practice)
// by Gaussian elimination with partial pivoting. Returns false if singular.
bool solve_dense(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x);

}  // namespace crcurv::num
