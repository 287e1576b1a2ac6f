#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>

#include "crcurv/criterion.hpp"
#include "crcurv/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crcurv;

namespace {

// two maxima of unit curvature with adjustable coupling; the workhorse of the
// scenario checks: pair eigenvalue is 1 - 2g
AbstractCriticalData two_maxima(double g) {
  AbstractCriticalData d;
  d.points = {{"y1", 1.0, -3.0, 0.0, 3}, {"y2", 1.0, -3.0, 0.0, 3}};
  d.green = {0.0, g, g, 0.0};
  return d;
}

AbstractCriticalData single_max() {
  AbstractCriticalData d;
  d.points = {{"y1", 1.0, -3.0, 0.0, 3}};
  d.green = {0.0};
  return d;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an Error");
}

}  // namespace

TEST_CASE("validation rejects malformed abstract data") {
  CHECK(code_of([] {
          AbstractCriticalData d;
          d.points = {{"y1", 1.0, 0.0, 0.0, 0}, {"y1", 1.0, 0.0, 0.0, 0}};
          d.green = {0, 1, 1, 0};
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          AbstractCriticalData d;
          d.points = {{"bad label", 1.0, 0.0, 0.0, 0}};
          d.green = {0.0};
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          AbstractCriticalData d;
          d.points = {{"y1", -1.0, 0.0, 0.0, 0}};
          d.green = {0.0};
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          AbstractCriticalData d;
          d.points = {{"y1", 1.0, 0.0, 0.0, 4}};
          d.green = {0.0};
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          auto d = two_maxima(0.4);
          d.green[1] = 0.5;  // breaks symmetry
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          auto d = two_maxima(-0.2);  // negative coupling
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          auto d = two_maxima(0.4);
          d.mu = {{{"y1", "zz"}, 1, 0}};
          d.validate();
        }) == Errc::input);

  CHECK(code_of([] {
          auto d = two_maxima(0.4);
          d.mu = {{{"y1", "y2"}, 1, 2}};  // value outside {0,1}
          d.validate();
        }) == Errc::input);

  CHECK_NOTHROW(two_maxima(0.4).validate());
}

TEST_CASE("membership filter separates maxima from minima and flags razor edges") {
  AbstractCriticalData d;
  d.points = {{"max", 2.0, -48.0, 0.0, 3}, {"min", 1.0, 12.0, 0.0, 0}};
  d.green = {0.0, 0.3, 0.3, 0.0};
  CHECK(k_plus_filter(d) == std::vector<int>{0});

  // margin exactly zero: -lap/(3K) - 2A = 0 with lap = -3, A = 0.5
  AbstractCriticalData razor;
  razor.points = {{"y1", 1.0, -3.0, 0.5, 3}};
  razor.green = {0.0};
  CHECK(code_of([&] { k_plus_filter(razor); }) == Errc::c0_violation);

  // the tolerance is a dial: a 1e-9 margin is ambiguous at 1e-8 but not at 1e-10
  AbstractCriticalData thin;
  thin.points = {{"y1", 1.0, -3.0, 0.5 - 1.0e-9 / 2.0, 3}};
  thin.green = {0.0};
  CHECK(code_of([&] { k_plus_filter(thin); }) == Errc::c0_violation);
  CHECK(k_plus_filter(thin, 1e-10) == std::vector<int>{0});
}

TEST_CASE("interaction matrices carry the normalized couplings") {
  const auto weak = two_maxima(0.4);
  const auto im = build_matrix(weak, {0, 1});
  REQUIRE(im.m.size() == 4);
  CHECK(im.m[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(im.m[3] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(im.m[1] == doctest::Approx(-0.8).epsilon(1e-14));
  CHECK(im.m[2] == doctest::Approx(-0.8).epsilon(1e-14));
  CHECK(least_eigenvalue(im) == doctest::Approx(0.2).epsilon(1e-12));

  const auto strong = two_maxima(0.6);
  CHECK(least_eigenvalue(build_matrix(strong, {0, 1})) == doctest::Approx(-0.2).epsilon(1e-12));

  // K scaling enters through 1/sqrt(K_i K_j)
  AbstractCriticalData scaled = weak;
  scaled.points[0].k = 4.0;
  scaled.points[0].lap_k = -12.0;
  const auto im2 = build_matrix(scaled, {0, 1});
  CHECK(im2.m[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(im2.m[1] == doctest::Approx(-0.4).epsilon(1e-14));

  CHECK(code_of([&] { build_matrix(weak, {}); }) == Errc::input);
  CHECK(code_of([&] { build_matrix(weak, {1, 0}); }) == Errc::input);
  CHECK(code_of([&] { build_matrix(weak, {0, 2}); }) == Errc::input);

  InteractionMatrix crooked;
  crooked.points = {0, 1};
  crooked.m = {1.0, 0.5, 0.25, 1.0};
  CHECK(code_of([&] { least_eigenvalue(crooked); }) == Errc::consistency);
}

TEST_CASE("enumeration gives every subset a verdict in (size, lex) order") {
  const auto verdicts = enumerate_F1(two_maxima(0.6));
  REQUIRE(verdicts.size() == 3);

  CHECK(verdicts[0].points == std::vector<int>{0});
  CHECK(verdicts[1].points == std::vector<int>{1});
  CHECK(verdicts[2].points == std::vector<int>{0, 1});

  CHECK(verdicts[0].in_f1);
  CHECK(verdicts[0].rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verdicts[0].iota == 0);
  CHECK_FALSE(verdicts[0].pruned);

  CHECK_FALSE(verdicts[2].in_f1);
  CHECK(verdicts[2].rho == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(verdicts[2].iota == 1);
  CHECK_FALSE(verdicts[2].pruned);
}

TEST_CASE("tuples behind a failed facet are pruned with the facet bound") {
  // pair {0,1} fails, both other pairs pass, so the triple is never diagonalized
  AbstractCriticalData d;
  d.points = {{"y1", 1.0, -3.0, 0.0, 3},
              {"y2", 1.0, -3.0, 0.0, 3},
              {"y3", 1.0, -3.0, 0.0, 3}};
  d.green = {0.0, 0.6, 0.1, 0.6, 0.0, 0.1, 0.1, 0.1, 0.0};

  const auto verdicts = enumerate_F1(d);
  REQUIRE(verdicts.size() == 7);
  const auto& triple = verdicts.back();
  CHECK(triple.points == std::vector<int>{0, 1, 2});
  CHECK(triple.pruned);
  CHECK_FALSE(triple.in_f1);
  CHECK(triple.rho == doctest::Approx(-0.2).epsilon(1e-12));  // the failed facet's rho

  // interlacing really does cap the true eigenvalue by the reported bound
  const auto brute = oracles::brute_force_F1(d);
  CHECK(brute.back().rho <= triple.rho + 1e-12);
  CHECK_FALSE(brute.back().in_f1);
}

TEST_CASE("eigenvalues pinned to zero are a violation of the second condition") {
  CHECK(code_of([] { enumerate_F1(two_maxima(0.5)); }) == Errc::c1_violation);
  // still inside the relative tolerance band
  CHECK(code_of([] { enumerate_F1(two_maxima(0.5 + 1e-10)); }) == Errc::c1_violation);
  // a millimargin clears the default band
  CHECK_NOTHROW(enumerate_F1(two_maxima(0.5005)));
  // and the band itself is adjustable
  CHECK(code_of([] { enumerate_F1(two_maxima(0.4), 0.5); }) == Errc::c1_violation);
}

TEST_CASE("the enumeration cap rejects oversized admissible sets") {
  AbstractCriticalData d;
  for (int i = 0; i < 3; ++i) {
    d.points.push_back({"y" + std::to_string(i + 1), 1.0, -3.0, 0.0, 3});
  }
  d.green.assign(9, 0.1);
  for (int i = 0; i < 3; ++i) d.green[i * 3 + i] = 0.0;
  CHECK(code_of([&] { enumerate_F1(d, 1e-8, 2); }) == Errc::input);
}

TEST_CASE("index bookkeeping counts points and co-indices") {
  AbstractCriticalData d;
  d.points = {{"y1", 1.0, -3.0, 0.0, 3}, {"y2", 1.0, -3.0, 0.0, 2}, {"y3", 1.0, -3.0, 0.0, 0}};
  d.green = {0.0, 0.1, 0.1, 0.1, 0.0, 0.1, 0.1, 0.1, 0.0};

  CHECK(index_iota(d, {0}) == 0);
  CHECK(index_iota(d, {1}) == 1);
  CHECK(index_iota(d, {2}) == 3);
  CHECK(index_iota(d, {0, 1}) == 2);
  CHECK(index_iota(d, {0, 1, 2}) == 6);
}

TEST_CASE("alternating sums match direct summation and stop at the top level") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto data = oracles::random_instance(rng, 6);
    const auto verdicts = enumerate_F1(data);
    const auto sums = euler_hopf_sums(data, verdicts);
    const auto direct = oracles::direct_alternating_sums(oracles::brute_force_F1(data));
    REQUIRE(sums.size() == direct.size());
    for (std::size_t k = 0; k < sums.size(); ++k) CHECK(sums[k] == direct[k]);
    CHECK(sums.front() == 0);
  }
}

TEST_CASE("scenario: strong coupling excludes the pair and certifies a solution") {
  const auto rep = check_theorem_main(two_maxima(0.6));
  CHECK(rep.k_plus == std::vector<int>{0, 1});
  CHECK(rep.l_sharp == 0);
  REQUIRE(rep.scan.size() == 2);
  CHECK(rep.scan[0].s_k == 0);
  CHECK_FALSE(rep.scan[0].level_free);  // two index-0 singles block k = 0
  CHECK(rep.scan[1].s_k == 2);
  CHECK(rep.scan[1].admissible);
  CHECK(rep.exists);
  CHECK(rep.first_k == 1);
  CHECK(rep.count_bound == 1);
  CHECK_FALSE(rep.used_mu);
}

TEST_CASE("scenario: weak coupling keeps the pair and the scan comes up empty") {
  const auto rep = check_theorem_main(two_maxima(0.4));
  CHECK(rep.l_sharp == 1);
  REQUIRE(rep.scan.size() == 3);
  CHECK(rep.scan[0].sum_ok);            // S_0 = 0
  CHECK_FALSE(rep.scan[0].level_free);  // singles with iota 0
  CHECK_FALSE(rep.scan[1].level_free);  // the pair has iota 1
  CHECK(rep.scan[2].s_k == 1);          // 1 + 1 - 1
  CHECK_FALSE(rep.scan[2].sum_ok);
  CHECK_FALSE(rep.exists);
  CHECK(rep.first_k == -1);
}

TEST_CASE("scenario: a single admissible maximum is inconclusive") {
  const auto rep = check_theorem_main(single_max());
  CHECK(rep.l_sharp == 0);
  CHECK_FALSE(rep.exists);  // S_1 = 1 and level 0 is occupied
}

TEST_CASE("scenario: an even intersection count reopens the weak-coupling case") {
  auto d = two_maxima(0.4);
  d.mu = {{{"y1", "y2"}, 1, 0}};
  const auto rep = check_theorem_general(d);
  CHECK(rep.used_mu);
  REQUIRE(rep.scan.size() == 3);
  CHECK_FALSE(rep.scan[0].level_free);  // singles carry no recorded values
  CHECK(rep.scan[1].level_free);        // the pair's value is even
  CHECK(rep.scan[1].admissible);
  CHECK(rep.exists);
  CHECK(rep.first_k == 1);
  CHECK(rep.count_bound == 1);

  // an odd value keeps the level blocked
  d.mu = {{{"y1", "y2"}, 1, 1}};
  const auto odd = check_theorem_general(d);
  CHECK_FALSE(odd.scan[1].level_free);
  CHECK_FALSE(odd.exists);

  // label order in the table must not matter
  d.mu = {{{"y2", "y1"}, 1, 0}};
  CHECK(check_theorem_general(d).exists);
}

TEST_CASE("a partially covered level is an input error, an untouched one is not") {
  // three maxima, all pairs in F1 with iota 1
  AbstractCriticalData d;
  d.points = {{"y1", 1.0, -3.0, 0.0, 3},
              {"y2", 1.0, -3.0, 0.0, 3},
              {"y3", 1.0, -3.0, 0.0, 3}};
  d.green = {0.0, 0.4, 0.4, 0.4, 0.0, 0.4, 0.4, 0.4, 0.0};

  // cover only one of the three pairs at level 1
  d.mu = {{{"y1", "y2"}, 1, 0}};
  try {
    check_theorem_general(d);
    FAIL("expected a partial-coverage rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::input);
    CHECK(std::string(e.what()).find("partially") != std::string::npos);
  }

  // full coverage at level 1 is accepted
  d.mu = {{{"y1", "y2"}, 1, 0}, {{"y1", "y3"}, 1, 0}, {{"y2", "y3"}, 1, 0}};
  CHECK_NOTHROW(check_theorem_general(d));

  // values recorded at an irrelevant level leave every scan level on the
  // plain test
  d.mu = {{{"y1", "y2"}, 7, 0}};
  const auto rep = check_theorem_general(d);
  const auto plain = check_theorem_main(d);
  CHECK(rep.exists == plain.exists);
  CHECK(rep.first_k == plain.first_k);
}

TEST_CASE("with no table the general test reduces to the main one") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto data = oracles::random_instance(rng, 6);
    const auto a = check_theorem_main(data);
    const auto b = check_theorem_general(data);
    CHECK(a.exists == b.exists);
    CHECK(a.first_k == b.first_k);
    CHECK(a.count_bound == b.count_bound);
  }
}

TEST_CASE("the corollary is the top scan level of the main test") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = oracles::random_instance(rng, 6);
    const auto main_rep = check_theorem_main(data);
    const auto cor = check_corollary(data);

    CHECK(cor.scan.size() == 1);
    const long long total = main_rep.scan.back().s_k;
    CHECK(cor.scan.back().s_k == total);
    if (cor.exists) {
      CHECK(cor.first_k == main_rep.l_sharp + 1);
      CHECK(cor.count_bound == std::llabs(1 - total));
      CHECK(main_rep.exists);  // the main scan finds the top level at worst
    } else {
      CHECK(total == 1);
    }
  }
}

TEST_CASE("relabeling points permutes nothing that matters") {
  std::mt19937_64 rng(83);
  const auto data = oracles::random_instance(rng, 5);
  const int n = static_cast<int>(data.points.size());

  // reverse the point order
  AbstractCriticalData rev;
  for (int i = n - 1; i >= 0; --i) rev.points.push_back(data.points[i]);
  rev.green.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) rev.green[i * n + j] = data.green_at(n - 1 - i, n - 1 - j);

  const auto a = check_theorem_main(data);
  const auto b = check_theorem_main(rev);
  CHECK(a.exists == b.exists);
  CHECK(a.first_k == b.first_k);
  CHECK(a.count_bound == b.count_bound);
  CHECK(a.l_sharp == b.l_sharp);

  // F1 membership carries over through the relabeling
  std::set<std::set<std::string>> fa, fb;
  for (const auto& t : enumerate_F1(data))
    if (t.in_f1) {
      std::set<std::string> s;
      for (int i : t.points) s.insert(data.points[i].label);
      fa.insert(s);
    }
  for (const auto& t : enumerate_F1(rev))
    if (t.in_f1) {
      std::set<std::string> s;
      for (int i : t.points) s.insert(rev.points[i].label);
      fb.insert(s);
    }
  CHECK(fa == fb);
}

TEST_CASE("joint scaling of the analytic inputs rescales eigenvalues only") {
  std::mt19937_64 rng(19);
  const double c = 2.7;
  for (int trial = 0; trial < 10; ++trial) {
    const auto data = oracles::random_instance(rng, 5);
    AbstractCriticalData scaled = data;
    for (auto& p : scaled.points) {
      p.lap_k *= c;
      p.a *= c;
    }
    for (auto& g : scaled.green) g *= c;

    const auto va = enumerate_F1(data);
    const auto vb = enumerate_F1(scaled);
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      CHECK(va[i].points == vb[i].points);
      CHECK(va[i].in_f1 == vb[i].in_f1);
      CHECK(vb[i].rho == doctest::Approx(c * va[i].rho).epsilon(1e-9));
    }

    const auto ra = check_theorem_main(data);
    const auto rb = check_theorem_main(scaled);
    CHECK(ra.exists == rb.exists);
    CHECK(ra.first_k == rb.first_k);
    CHECK(ra.count_bound == rb.count_bound);
  }
}
