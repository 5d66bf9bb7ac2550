#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "saslift/jet.hpp"

using namespace saslift;

namespace {

// All multi-indices over num_vars variables with total degree <= order.
void enumerate(int num_vars, int order, MultiIndex& cur, int var, int used,
               std::vector<MultiIndex>& out) {
  if (var == num_vars) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e + used <= order; ++e) {
    cur[var] = e;
    enumerate(num_vars, order, cur, var + 1, used + e, out);
  }
}

std::vector<MultiIndex> all_indices(int num_vars, int order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(num_vars, 0);
  enumerate(num_vars, order, cur, 0, 0, out);
  return out;
}

// Random jet with prescribed coefficients in [-2, 2]: built as a polynomial in
// zero-seeded variables, so the monomial x^m carries exactly coefficient c_m.
Jet random_jet(std::mt19937_64& rng, int num_vars, int order) {
  auto coeff = [&rng] { return -2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53); };
  Jet r = Jet::constant(coeff(), order, num_vars);
  for (const MultiIndex& m : all_indices(num_vars, order)) {
    if (degree(m) == 0) continue;
    Jet mono = Jet::constant(1.0, order, num_vars);
    for (int v = 0; v < num_vars; ++v)
      for (int e = 0; e < m[v]; ++e) mono *= Jet::variable(v, 0.0, order, num_vars);
    r += mono * coeff();
  }
  return r;
}

}  // namespace

TEST_CASE("seed_variable produces coordinate jets") {
  Jet j = Jet::variable(0, 3.0, 2, 2);
  CHECK(j.coeff({0, 0}) == 3.0);
  CHECK(j.coeff({1, 0}) == 1.0);
  CHECK(j.coeff({0, 1}) == 0.0);
  CHECK(j.coeff({2, 0}) == 0.0);
  CHECK(j.coeff({1, 1}) == 0.0);
  CHECK(j.coeff({0, 2}) == 0.0);

  Jet k = Jet::variable(1, 0.0, 1, 3);
  CHECK(k.value() == 0.0);
  CHECK(k.coeff({0, 1, 0}) == 1.0);
  CHECK(k.coeff({1, 0, 0}) == 0.0);
  CHECK(k.coeff({0, 0, 1}) == 0.0);
}

TEST_CASE("x*x at 2 reproduces the hand Taylor expansion of x^2") {
  Jet x = Jet::variable(0, 2.0, 2, 1);
  Jet f = x * x;
  CHECK(f.coeff({0}) == 4.0);
  CHECK(f.coeff({1}) == 4.0);
  CHECK(f.coeff({2}) == 1.0);
}

TEST_CASE("order-0 jets degenerate to real arithmetic") {
  Jet a = Jet::constant(2.0, 0, 1), b = Jet::constant(3.0, 0, 1);
  CHECK((a * b).value() == 6.0);
}

TEST_CASE("log(1 + x^2 + y^2) at the origin has the hand-expansion coefficients") {
  Jet x = Jet::variable(0, 0.0, 4, 2), y = Jet::variable(1, 0.0, 4, 2);
  Jet f = log(1.0 + x * x + y * y);
  // log(1+u) = u - u^2/2 + ... with u = x^2 + y^2.
  CHECK(f.coeff({2, 0}) == Catch::Approx(1.0).margin(1e-14));
  CHECK(f.coeff({0, 2}) == Catch::Approx(1.0).margin(1e-14));
  CHECK(f.coeff({1, 1}) == Catch::Approx(0.0).margin(1e-14));
  CHECK(f.coeff({4, 0}) == Catch::Approx(-0.5).margin(1e-14));
  CHECK(f.coeff({2, 2}) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(f.coeff({0, 4}) == Catch::Approx(-0.5).margin(1e-14));
  CHECK(f.coeff({3, 1}) == Catch::Approx(0.0).margin(1e-14));

  // Cross-check the degree-2 block against central finite differences.
  auto fn = [](const Vec& p) { return std::log(1.0 + p[0] * p[0] + p[1] * p[1]); };
  Vec origin = Vec::Zero(2);
  CHECK(f.partial({2, 0}) == Catch::Approx(oracles::central_diff_2(fn, origin, 0, 0)).margin(1e-6));
  CHECK(f.partial({1, 1}) == Catch::Approx(oracles::central_diff_2(fn, origin, 0, 1)).margin(1e-6));
}

TEST_CASE("derivative of exp via an order-1 jet") {
  Jet x = Jet::variable(0, 1.0, 1, 1);
  CHECK(exp(x).partial({1}) == Catch::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("extract_partial multiplies by the multi-index factorial") {
  Jet s = Jet::variable(0, 5.0, 2, 1);
  CHECK(s.partial({1}) == 1.0);
  CHECK(s.partial({0}) == 5.0);

  Jet x = Jet::variable(0, 1.0, 2, 2), y = Jet::variable(1, 1.0, 2, 2);
  Jet f = x * x * y;  // truncated at order 2
  CHECK(f.partial({1, 1}) == Catch::Approx(2.0).epsilon(1e-14));  // d2(x^2 y)/dxdy = 2x
}

TEST_CASE("derivative_tensor on simple maps") {
  auto identity2 = [](std::span<const Jet> q) { return JetVec(q.begin(), q.end()); };
  Vec p(2);
  p << 0.3, -0.7;
  auto dt = derivative_tensor(identity2, std::span<const double>(p.data(), 2), 1);
  CHECK(dt.partial(0, {1, 0}) == 1.0);
  CHECK(dt.partial(0, {0, 1}) == 0.0);
  CHECK(dt.partial(1, {1, 0}) == 0.0);
  CHECK(dt.partial(1, {0, 1}) == 1.0);

  auto curve = [](std::span<const Jet> q) {
    JetVec out;
    out.push_back(q[0] * q[0]);
    out.push_back(q[0] * q[0] * q[0]);
    return out;
  };
  Vec x1(1);
  x1 << 2.0;
  auto dc = derivative_tensor(curve, std::span<const double>(x1.data(), 1), 2);
  CHECK(dc.value(0) == 4.0);
  CHECK(dc.value(1) == 8.0);
  CHECK(dc.partial(0, {1}) == 4.0);
  CHECK(dc.partial(1, {1}) == 12.0);
  CHECK(dc.partial(0, {2}) == 2.0);
  CHECK(dc.partial(1, {2}) == 12.0);

  auto flat_metric = [](std::span<const Jet> q) {
    JetVec out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.push_back(q[0].constant_like(i == j ? 1.0 : 0.0));
    return out;
  };
  auto df = derivative_tensor(flat_metric, std::span<const double>(p.data(), 2), 2);
  for (int a = 0; a < 4; ++a) {
    CHECK(df.partial(a, {1, 0}) == 0.0);
    CHECK(df.partial(a, {0, 1}) == 0.0);
    CHECK(df.partial(a, {1, 1}) == 0.0);
    CHECK(df.partial(a, {2, 0}) == 0.0);
  }
}

TEST_CASE("jet multiplication is commutative and associative") {
  std::mt19937_64 rng(20240517);
  for (int trial = 0; trial < 60; ++trial) {
    int num_vars = 1 + static_cast<int>(rng() % 4);
    int order = 1 + static_cast<int>(rng() % 4);
    Jet a = random_jet(rng, num_vars, order);
    Jet b = random_jet(rng, num_vars, order);
    Jet c = random_jet(rng, num_vars, order);
    for (const MultiIndex& m : all_indices(num_vars, order)) {
      double ab = (a * b).coeff(m), ba = (b * a).coeff(m);
      double abc = ((a * b) * c).coeff(m), bca = (a * (b * c)).coeff(m);
      CHECK(std::abs(ab - ba) <= 1e-14 * (1.0 + std::abs(ab)));
      CHECK(std::abs(abc - bca) <= 1e-13 * (1.0 + std::abs(abc)));
    }
  }
}

TEST_CASE("extract_partial after seed_variable reproduces the Kronecker pattern exactly") {
  for (int num_vars = 1; num_vars <= 4; ++num_vars)
    for (int order = 1; order <= 3; ++order)
      for (int i = 0; i < num_vars; ++i) {
        Jet s = Jet::variable(i, 0.25 * (i + 1), order, num_vars);
        for (const MultiIndex& m : all_indices(num_vars, order)) {
          double expect = 0.0;
          if (degree(m) == 0)
            expect = 0.25 * (i + 1);
          else if (degree(m) == 1 && m[i] == 1)
            expect = 1.0;
          CHECK(s.partial(m) == expect);
        }
      }
}

TEST_CASE("elementary functions match finite differences") {
  auto fd_check = [](const Jet& jet, const oracles::RealFn& fn, const Vec& p) {
    int nv = jet.num_vars();
    for (int i = 0; i < nv; ++i) {
      double fd = oracles::central_diff_1(fn, p, i);
      double an = jet.partial(unit_index(i, nv));
      CHECK(std::abs(an - fd) / (1.0 + std::abs(an)) < 1e-5);
      for (int j = i; j < nv; ++j) {
        double fd2 = oracles::central_diff_2(fn, p, i, j);
        double an2 = jet.partial(pair_index(i, j, nv));
        CHECK(std::abs(an2 - fd2) / (1.0 + std::abs(an2)) < 1e-5);
      }
    }
  };

  Vec p(2);
  p << 0.4, -0.3;
  JetVec q = seed_point(std::span<const double>(p.data(), 2), 2);

  fd_check(exp(q[0] * q[1]),
           [](const Vec& x) { return std::exp(x[0] * x[1]); }, p);
  fd_check(sqrt(2.0 + q[0] + q[1] * q[1]),
           [](const Vec& x) { return std::sqrt(2.0 + x[0] + x[1] * x[1]); }, p);
  fd_check(1.0 / (1.0 + q[0] * q[0] + q[1] * q[1]),
           [](const Vec& x) { return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]); }, p);
  fd_check(pow(1.5 + q[0], -2.5),
           [](const Vec& x) { return std::pow(1.5 + x[0], -2.5); }, p);
}

TEST_CASE("jet misuse is rejected") {
  CHECK_THROWS_AS(Jet::variable(0, 1.0, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(Jet::variable(3, 1.0, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(Jet::variable(0, 1.0, 2, 10), std::invalid_argument);

  Jet a = Jet::variable(0, 1.0, 2, 2);
  Jet b = Jet::variable(0, 1.0, 1, 2);
  Jet c = Jet::variable(0, 1.0, 2, 3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * c, std::invalid_argument);

  Jet z = Jet::variable(0, 0.0, 2, 1);
  CHECK_THROWS_AS(a / (a - 1.0), std::domain_error);
  CHECK_THROWS_AS(log(z), std::domain_error);
  CHECK_THROWS_AS(sqrt(z - 1.0), std::domain_error);

  CHECK_THROWS_AS(a.partial({3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(a.partial({1}), std::invalid_argument);
}
