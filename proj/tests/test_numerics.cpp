#include <cmath>
#include <random>
#include <vector>

#include "crcurv/errors.hpp"
#include "crcurv/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crcurv;

TEST_CASE("gauss-legendre rules integrate polynomials to machine precision") {
  const auto& rule = num::gauss_legendre(8);
  REQUIRE(rule.nodes.size() == 8);

  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(std::abs(wsum - 2.0) < 1e-14);

  // an n-node rule is exact through degree 2n - 1
  for (int k = 0; k <= 15; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(acc - exact) < 1e-13);
  }

  // the cache hands back the same object
  CHECK(&num::gauss_legendre(8) == &num::gauss_legendre(8));
}

TEST_CASE("halton sequences emit the radical-inverse values") {
  CHECK(num::halton(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(num::halton(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(num::halton(3, 2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(num::halton(4, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(num::halton(1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(num::halton(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(num::halton(3, 3) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  for (std::uint64_t i = 1; i <= 200; ++i) {
    const double v = num::halton(i, 5);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("inverse normal cdf hits tabulated quantiles and is antisymmetric") {
  CHECK(std::abs(num::inverse_normal_cdf(0.5)) < 1e-12);
  CHECK(num::inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(num::inverse_normal_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-9));
  for (double p : {0.01, 0.2, 0.35, 0.49}) {
    CHECK(num::inverse_normal_cdf(p) ==
          doctest::Approx(-num::inverse_normal_cdf(1.0 - p)).epsilon(1e-12));
  }
}

TEST_CASE("quintic smoothstep clamps, interpolates, and stays monotone") {
  CHECK(num::smoothstep_quintic(-3.0, 0.0, 1.0) == 1.0);
  CHECK(num::smoothstep_quintic(0.0, 0.0, 1.0) == 1.0);
  CHECK(num::smoothstep_quintic(1.0, 0.0, 1.0) == 0.0);
  CHECK(num::smoothstep_quintic(7.0, 0.0, 1.0) == 0.0);
  CHECK(num::smoothstep_quintic(0.5, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = num::smoothstep_quintic(i / 100.0, 0.0, 1.0);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }

  // flat first derivative at both ends
  const double h = 1e-4;
  CHECK(std::abs(num::smoothstep_quintic(h, 0.0, 1.0) - 1.0) < 1e-10);
  CHECK(std::abs(num::smoothstep_quintic(1.0 - h, 0.0, 1.0)) < 1e-10);
}

TEST_CASE("jacobi eigenvalues match closed-form spectra") {
  const std::vector<double> m{2.0, 1.0, 1.0, 2.0};
  const auto eigs = num::jacobi_eigenvalues(m, 2);
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eigs[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("jacobi least eigenvalue agrees with the root oracles on random matrices") {
  std::mt19937_64 rng(91);
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto im = oracles::random_symmetric_matrix(rng, p, 1e-6);
      const auto eigs = num::jacobi_eigenvalues(im.m, p);
      const double closed = oracles::characteristic_least_eigenvalue(im.m, p);
      const double inertia = oracles::inertia_least_eigenvalue(im.m, p);
      CHECK(std::abs(eigs.front() - closed) < 1e-10);
      CHECK(std::abs(eigs.front() - inertia) < 1e-10);
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto im = oracles::random_symmetric_matrix(rng, 5, 1e-6);
    const auto eigs = num::jacobi_eigenvalues(im.m, 5);
    CHECK(std::abs(eigs.front() - oracles::inertia_least_eigenvalue(im.m, 5)) < 1e-10);
  }
}

TEST_CASE("jacobi rejects asymmetric input") {
  std::vector<double> m{1.0, 0.5, 0.25, 1.0};
  CHECK_THROWS_AS(num::jacobi_eigenvalues(m, 2), Error);
}

TEST_CASE("dense solve recovers known solutions and flags singular systems") {
  // [[4,1],[1,3]] x = (1, 2) has x = (1/11, 7/11)
  std::vector<double> x;
  REQUIRE(num::solve_dense({4.0, 1.0, 1.0, 3.0}, {1.0, 2.0}, 2, x));
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-13));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-13));

  CHECK_FALSE(num::solve_dense({1.0, 2.0, 2.0, 4.0}, {1.0, 1.0}, 2, x));
}
