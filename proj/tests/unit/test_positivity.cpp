#include <cmath>
#include <random>

#include "doctest.h"
#include "posmap/construction.hpp"
#include "posmap/errors.hpp"
#include "posmap/positivity.hpp"
#include "test_util.hpp"

using namespace posmap;

namespace {

DiagonalTypeMap circ(std::vector<double> alphas) {
  return DiagonalTypeMap::circulant(alphas);
}

SimplexPoint pt(std::vector<double> p) { return SimplexPoint(std::move(p)); }

double q2_margin(const RealMatrix& a) {
  return std::sqrt(a(0, 0) * a(1, 1)) + std::sqrt(a(0, 1) * a(1, 0)) - 1.0;
}

// Cho-abc decision written out independently of the library.
bool cho_positive(double a, double b, double c) {
  if (a + b + c < 2) return false;
  if (a <= 1 && b * c < (1 - a) * (1 - a)) return false;
  return true;
}

double cho_margin(double a, double b, double c) {
  double m = a + b + c - 2;
  if (a <= 1) m = std::min(m, b * c - (1 - a) * (1 - a));
  return m;
}

}  // namespace

TEST_SUITE("positivity") {

TEST_CASE("in_lhs values") {
  RealMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  CHECK(in_lhs(DiagonalTypeMap(sx), pt({0.5, 0.5})) == doctest::Approx(1.0));

  std::mt19937_64 rng(1);
  for (int n = 2; n <= 5; ++n) {
    const DiagonalTypeMap m(test::random_uniform(n, 0, 3, rng));
    std::vector<double> vertex(n, 0.0);
    vertex[0] = 1.0;
    CHECK(in_lhs(m, pt(vertex)) == doctest::Approx(1 / (1 + m(0, 0))).epsilon(1e-15));
  }

  for (auto abc : {std::vector<double>{0.5, 0.75, 0.75}, {1, 1, 0}, {0.2, 0.3, 0.1}}) {
    const double s = abc[0] + abc[1] + abc[2];
    const double v = in_lhs(circ(abc), pt({1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK(v == doctest::Approx(3 / (1 + s)).epsilon(1e-15));
    CHECK((v <= 1 + 1e-15) == (s >= 2));
  }
}

TEST_CASE("in_lhs edge cases") {
  // Zero rows make B_i vanish on the support boundary; those terms count 0.
  const DiagonalTypeMap zero(RealMatrix::Zero(3, 3));
  CHECK(in_lhs(zero, pt({1, 0, 0})) == 1.0);
  CHECK(in_lhs(zero, pt({0.5, 0.5, 0})) == 2.0);
  RealMatrix neg = RealMatrix::Ones(2, 2);
  neg(1, 0) = -0.1;
  CHECK_THROWS_AS(in_lhs(DiagonalTypeMap(neg), pt({0.5, 0.5})), ConstraintViolation);
  CHECK_THROWS_AS(in_lhs(zero, pt({0.5, 0.5})), DimensionError);
  CHECK_THROWS_AS(SimplexPoint({0.5, 0.6}), Error);
  CHECK_THROWS_AS(SimplexPoint({1.5, -0.5}), Error);
}

TEST_CASE("in_lhs gradient matches central differences") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const DiagonalTypeMap m(test::random_uniform(n, 0, 2, rng));
    const auto p = test::random_simplex(n, rng);
    const auto g = in_lhs_gradient(m, p);
    // Differentiate the unnormalised expression directly.
    auto f = [&](const std::vector<double>& q) {
      double s = 0;
      for (int i = 0; i < n; ++i) {
        double b = q[i];
        for (int j = 0; j < n; ++j) b += m(i, j) * q[j];
        s += q[i] / b;
      }
      return s;
    };
    for (int k = 0; k < n; ++k) {
      const double h = 1e-6;
      auto up = p, dn = p;
      up[k] += h;
      dn[k] -= h;
      CHECK(g[k] == doctest::Approx((f(up) - f(dn)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("in_lhs is scale invariant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const DiagonalTypeMap m(test::random_uniform(n, 0, 3, rng));
    const auto p = test::random_simplex(n, rng);
    std::vector<double> scaled(p);
    const double t = u(rng);
    for (double& x : scaled) x *= t;
    CHECK(in_lhs(m, SimplexPoint::normalized(scaled)) ==
          doctest::Approx(in_lhs(m, pt(p))).epsilon(1e-14));
  }
}

TEST_CASE("circulant inequality equals in_lhs of the circulant map") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 6;
    std::vector<double> alphas(n);
    for (double& a : alphas) a = u(rng);
    const SimplexPoint p(test::random_simplex(n, rng));
    CHECK(check_circulant_inequality(alphas, p) ==
          doctest::Approx(in_lhs(circ(alphas), p)).epsilon(1e-14));
  }
  const std::vector<double> r{0, 1, 1};
  CHECK(check_circulant_inequality(r, pt({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(1.0));
}

TEST_CASE("numerical positivity examples") {
  const auto v1 = check_positive_numerical(circ({2, 0, 0}));
  CHECK(v1.status == Status::PositiveNumerical);
  CHECK(v1.margin >= -1e-7);

  const auto v2 = check_positive_numerical(circ({0.5, 0.75, 0.75}));
  CHECK(v2.status == Status::PositiveNumerical);

  const auto m3 = circ({0.5, 1.4, 0.1});
  const auto v3 = check_positive_numerical(m3);
  CHECK(v3.status == Status::NotPositive);
  REQUIRE(v3.witness);
  CHECK(in_lhs(m3, SimplexPoint::normalized(*v3.witness)) > 1 + 1e-7);
  CHECK_FALSE(closed_form_n3_circulant(0.5, 1.4, 0.1).positive());

  RealMatrix neg = RealMatrix::Ones(3, 3);
  neg(2, 1) = -0.5;
  const auto v4 = check_positive_numerical(DiagonalTypeMap(neg));
  CHECK(v4.status == Status::NotPositive);
  REQUIRE(v4.offending_entry);
  CHECK(*v4.offending_entry == std::make_pair(2, 1));
}

TEST_CASE("exhausted budget is inconclusive, never positive") {
  // The maximum of this CP map is not at a start point, and one iteration
  // cannot settle it.
  RealMatrix a(3, 3);
  a << 3, 0.1, 2.5, 0.2, 4, 0.3, 1.7, 0.1, 2.2;
  OptimizerConfig cfg;
  cfg.restarts = 1;
  cfg.iterations = 1;
  const auto v = check_positive_numerical(DiagonalTypeMap(a), cfg);
  CHECK(v.status == Status::Inconclusive);
  cfg.iterations = 500;
  CHECK(check_positive_numerical(DiagonalTypeMap(a), cfg).status ==
        Status::PositiveNumerical);
}

TEST_CASE("closed-form positivity examples") {
  RealMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const auto r2 = check_positive_closed(DiagonalTypeMap(sx));
  REQUIRE(r2);
  CHECK(r2->status == Status::PositiveCertified);
  CHECK(r2->margin == doctest::Approx(0.0));

  const auto choi = check_positive_closed(circ({1, 1, 0}));
  REQUIRE(choi);
  CHECK(choi->status == Status::PositiveCertified);

  const auto bad = check_positive_closed(circ({0, 1, 0.9}));
  REQUIRE(bad);
  CHECK(bad->status == Status::NotPositive);
  CHECK(bad->margin == doctest::Approx(-0.1));
  REQUIRE(bad->witness);  // the uniform point

  // n = 3 non-circulant and not CP: no closed form.
  RealMatrix a = RealMatrix::Ones(3, 3);
  a(0, 1) = 0.5;
  CHECK_FALSE(check_positive_closed(DiagonalTypeMap(a)));
  // n = 4 CP map: certified through complete positivity.
  const auto cp4 = check_positive_closed(circ({3, 0.2, 0.1, 0.5}));
  REQUIRE(cp4);
  CHECK(cp4->status == Status::PositiveCertified);
  CHECK(cp4->method == "closed:cp");
}

TEST_CASE("complete positivity") {
  CHECK(check_cp(circ({2, 0, 0})));
  CHECK_FALSE(check_cp(circ({1, 1, 0})));
  RealMatrix ones = RealMatrix::Ones(2, 2);
  CHECK(check_cp(DiagonalTypeMap(ones)));

  // D-matrix + off-diagonal nonnegativity == Choi PSD == a >= 0 and a00 a11 >= 1.
  std::mt19937_64 rng(6);
  int checked = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const RealMatrix a = test::random_uniform(2, -1, 3, rng);
    const double prod = a(0, 0) * a(1, 1);
    if (std::abs(prod - 1) < 1e-6 || std::abs(a.minCoeff()) < 1e-6) continue;
    const DiagonalTypeMap m(a);
    const bool prop = a.minCoeff() >= 0 && prod >= 1;
    const bool cp = check_cp(m);
    CHECK(cp == psd_test(choi_matrix(m)).psd);
    if (a(0, 0) >= 0 && a(1, 1) >= 0) CHECK(cp == prop);
    ++checked;
  }
  CHECK(checked > 3000);
  for (int n = 3; n <= 5; ++n)
    for (int trial = 0; trial < 300; ++trial) {
      const DiagonalTypeMap m(test::random_uniform(n, -0.5, 5, rng));
      const auto choi = psd_test(choi_matrix(m));
      if (std::abs(choi.min_eigenvalue) < 1e-6) continue;
      CHECK(check_cp(m) == choi.psd);
    }
}

TEST_CASE("indecomposability for n = 3") {
  CHECK(check_indecomposable_n3(1, 1, 0));
  CHECK_FALSE(check_indecomposable_n3(0, 1, 1));
  CHECK_FALSE(check_indecomposable_n3(2, 0, 0));
  CHECK_FALSE(check_indecomposable_n3(3, 0, 0));  // CP
  CHECK_THROWS_AS(check_indecomposable_n3(0, 1, 0.9), Error);
}

TEST_CASE("oracle") {
  const auto ok = oracle_positivity(circ({2, 0, 0}), 100000, 1);
  CHECK_FALSE(ok.violation);
  CHECK(ok.min_value > -1e-12);
  CHECK(ok.evaluations > 100000);

  const auto m = circ({0, 1, 0.9});
  const auto bad = oracle_positivity(m, 100000, 1);
  CHECK(bad.violation);
  CHECK(bad.min_value < -1e-7);
  // Re-evaluate the reported pair from scratch.
  const ComplexMatrix img = posmap::apply(m, bad.y * bad.y.adjoint());
  CHECK((bad.x.adjoint() * img * bad.x)(0, 0).real() == doctest::Approx(bad.min_value));
  CHECK(bad.x.norm() == doctest::Approx(1.0));

  std::mt19937_64 rng(12);
  for (int n = 2; n <= 5; ++n) {
    RealMatrix a = test::random_uniform(n, 0, 1, rng);
    a.diagonal().setConstant(n - 0.5);  // D diagonally dominant: CP
    const DiagonalTypeMap cp(a);
    REQUIRE(check_cp(cp));
    CHECK_FALSE(oracle_positivity(cp, 5000, n).violation);
  }
}

TEST_CASE("n = 2 numerical verdict agrees with the closed form") {
  std::mt19937_64 rng(21);
  int compared = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const RealMatrix a = test::random_uniform(2, 0, 3, rng);
    const double margin = q2_margin(a);
    if (std::abs(margin) <= 1e-6) continue;
    const auto v = check_positive_numerical(DiagonalTypeMap(a));
    REQUIRE(v.status != Status::Inconclusive);
    CHECK(v.positive() == (margin > 0));
    ++compared;
  }
  CHECK(compared > 1900);
}

TEST_CASE("n = 3 circulant numerical verdict agrees with the closed form") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0, 3);
  for (int trial = 0; trial < 1500; ++trial) {
    const double a = u(rng), b = u(rng) * (trial % 2 ? 1.0 : 0.4), c = u(rng) * 0.5;
    if (std::abs(cho_margin(a, b, c)) <= 1e-6) continue;
    const auto v = check_positive_numerical(circ({a, b, c}));
    REQUIRE(v.status != Status::Inconclusive);
    CHECK(v.positive() == cho_positive(a, b, c));
    CHECK(closed_form_n3_circulant(a, b, c).positive() == cho_positive(a, b, c));
  }
}

TEST_CASE("verdict invariants across random maps") {
  std::mt19937_64 rng(23);
  OptimizerConfig cfg;
  cfg.restarts = 60;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + trial % 3;
    const DiagonalTypeMap m(test::random_uniform(n, 0, 2.5, rng));
    const auto v = check_positive_numerical(m, cfg);
    if (v.status == Status::NotPositive) {
      REQUIRE(v.witness);
      CHECK(in_lhs(m, SimplexPoint::normalized(*v.witness)) > 1 + cfg.violation_tol);
    }
    if (v.positive()) {
      CHECK(oracle_positivity(m, 2000, trial).min_value >= -1e-7);
    }
    if (check_cp(m)) CHECK(v.status == Status::PositiveNumerical);
  }
}

TEST_CASE("positive circulant maps satisfy the trace condition") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0, 2);
  OptimizerConfig cfg;
  cfg.restarts = 60;
  int positives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 3;
    std::vector<double> alphas(n);
    for (double& x : alphas) x = u(rng);
    const auto v = check_positive_numerical(circ(alphas), cfg);
    if (v.positive()) {
      ++positives;
      CHECK(std::accumulate(alphas.begin(), alphas.end(), 0.0) >= n - 1 - 1e-9);
    }
  }
  CHECK(positives > 20);
}

}
