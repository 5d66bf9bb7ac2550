#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "saslift/calculus.hpp"
#include "saslift/catalog.hpp"
#include "saslift/kahler.hpp"

using namespace saslift;

namespace {

Vec unit_vector(const Mat& g, const Vec& v) { return v / std::sqrt(v.dot(g * v)); }

// Closedness of the Ricci form, from order-1 curvature jets (order-3 metric).
double ricci_form_closedness(const KahlerStructure& ks, const Vec& p) {
  CurvatureJets cj = curvature_jets(ks.base, p, 1);
  int d = cj.dim;
  std::vector<double> drho(d * d * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Jet rho_ab = cj.ricci[a * d + 0].constant_like(0.0);
      for (int c = 0; c < d; ++c)
        if (ks.J(c, b) != 0.0) rho_ab += cj.ricci[a * d + c] * ks.J(c, b);
      for (int c = 0; c < d; ++c) drho[idx3(d, c, a, b)] = rho_ab.partial_derivative(c).value();
    }
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        worst = std::max(worst, std::abs(drho[idx3(d, a, b, c)] + drho[idx3(d, b, c, a)] +
                                         drho[idx3(d, c, a, b)]));
  return worst;
}

}  // namespace

TEST_CASE("from_potential: flat potential yields the identity metric and zero curvature") {
  KahlerStructure ks = from_potential(
      [](JetPoint q) {
        Jet s = q[0].constant_like(0.0);
        for (int a = 0; a < 2; ++a) s += q[a] * q[a];
        return s * 0.5;
      },
      2, Box::centered(2, 1.0));
  PointSampler s(ks.base.sample_box, 21);
  for (int it = 0; it < 5; ++it) {
    Vec p = s.next_point();
    Mat g = metric_value(ks.base, p);
    CHECK((g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(curvature_suite(ks.base, p).scalar) < 1e-12);
  }
}

TEST_CASE("from_potential: Fubini-Study and complex hyperbolic reach their targets") {
  for (int n : {1, 2}) {
    int d = 2 * n;
    KahlerStructure fs = from_potential(
        [d](JetPoint q) {
          Jet s = q[0].constant_like(1.0);
          for (int a = 0; a < d; ++a) s += q[a] * q[a];
          return log(s) * 0.5;
        },
        d, Box::centered(d, 0.7));
    PointSampler s(fs.base.sample_box, 33);
    for (int it = 0; it < 5; ++it) {
      Vec p = s.next_point();
      Mat g = metric_value(fs.base, p);
      Vec v = unit_vector(g, s.next_vector(d));
      CHECK(holomorphic_sectional(fs, p, v) == Catch::Approx(4.0).margin(1e-9));
    }
    if (n == 1) {
      Vec p = s.next_point();
      CHECK(curvature_suite(fs.base, p).scalar == Catch::Approx(8.0).margin(1e-9));
    }
  }

  KahlerStructure ch = build_catalog("complex-hyperbolic", {1, 0.0}).ks;
  PointSampler s(ch.base.sample_box, 35);
  for (int it = 0; it < 5; ++it) {
    Vec p = s.next_point();
    Mat g = metric_value(ch.base, p);
    Vec v = unit_vector(g, s.next_vector(2));
    CHECK(holomorphic_sectional(ch, p, v) == Catch::Approx(-4.0).margin(1e-9));
  }
}

TEST_CASE("from_metric: flat input gives linear tau with d tau = omega") {
  BuiltManifold flat = build_catalog("flat", {1, 0.0});
  const KahlerStructure& ks = flat.ks;
  PointSampler s(ks.base.sample_box, 8);
  for (int it = 0; it < 10; ++it) {
    Vec p = s.next_point();
    JetVec q = seed_point(std::span<const double>(p.data(), 2), 1);
    JetVec tau = ks.tau(q);
    JetVec tau_ref = ks.analytic_tau(q);
    // Coefficient-level agreement with the analytic linear form.
    for (int b = 0; b < 2; ++b) {
      CHECK(std::abs(tau[b].value() - tau_ref[b].value()) < 1e-12);
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(tau[b].partial_derivative(c).value() -
                       tau_ref[b].partial_derivative(c).value()) < 1e-12);
    }
    Mat dtau = exterior_derivative_half(ks.tau, p);
    Mat omega = jet_values(eval_at(ks.omega, p, 0), 2, 2);
    CHECK((dtau - omega).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("from_metric rejects non-Hermitian input") {
  Mat g = Mat::Identity(2, 2);
  g(1, 1) = 2.0;
  CHECK_THROWS_AS(
      from_metric(constant_matrix_field(g), standard_complex_structure(2), 2, Box::centered(2, 1.0)),
      chart_error);
}

TEST_CASE("cigar metric is a valid Kaehler structure") {
  BuiltManifold cig = build_catalog("cigar", {1, 0.0});
  PointSampler s(cig.ks.base.sample_box, 13);
  for (int it = 0; it < 5; ++it) {
    Vec p = s.next_point();
    Mat dtau = exterior_derivative_half(cig.ks.tau, p);
    Mat omega = jet_values(eval_at(cig.ks.omega, p, 0), 2, 2);
    CHECK((dtau - omega).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("tau_primitive: base point value and Fubini-Study self-consistency") {
  BuiltManifold fs = build_catalog("fubini-study", {1, 0.0});
  Vec origin = Vec::Zero(2);
  JetVec q0 = seed_point(std::span<const double>(origin.data(), 2), 0);
  JetVec tau0 = fs.ks.tau(q0);
  CHECK(std::abs(tau0[0].value()) < 1e-15);
  CHECK(std::abs(tau0[1].value()) < 1e-15);

  PointSampler s(fs.ks.base.sample_box, 55);
  for (int it = 0; it < 50; ++it) {
    Vec p = s.next_point();
    Mat dtau = exterior_derivative_half(fs.ks.tau, p);
    Mat omega = jet_values(eval_at(fs.ks.omega, p, 0), 2, 2);
    CHECK((dtau - omega).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("holomorphic_sectional: flat vanishes and rejects non-unit vectors") {
  BuiltManifold flat = build_catalog("flat", {2, 0.0});
  PointSampler s(flat.ks.base.sample_box, 3);
  Vec p = s.next_point();
  Vec v = unit_vector(metric_value(flat.ks.base, p), s.next_vector(4));
  CHECK(std::abs(holomorphic_sectional(flat.ks, p, v)) < 1e-12);
  CHECK_THROWS_AS(holomorphic_sectional(flat.ks, p, 2.0 * v), std::invalid_argument);
}

TEST_CASE("ricci_form: flat, Fubini-Study and cigar") {
  BuiltManifold flat = build_catalog("flat", {1, 0.0});
  Vec p(2);
  p << 0.4, -0.2;
  CHECK(ricci_form(flat.ks, p).cwiseAbs().maxCoeff() < 1e-13);

  BuiltManifold fs = build_catalog("fubini-study", {1, 0.0});
  PointSampler s(fs.ks.base.sample_box, 77);
  for (int it = 0; it < 5; ++it) {
    Vec q = s.next_point();
    Mat rho = ricci_form(fs.ks, q);
    Mat omega = jet_values(eval_at(fs.ks.omega, q, 0), 2, 2);
    CHECK((rho - 4.0 * omega).cwiseAbs().maxCoeff() < 1e-9);  // Einstein constant 2n+2 = 4
  }

  BuiltManifold cig = build_catalog("cigar", {1, 0.0});
  Vec origin = Vec::Zero(2);
  Mat rho = ricci_form(cig.ks, origin);
  Mat omega = jet_values(eval_at(cig.ks.omega, origin, 0), 2, 2);
  double scalar = curvature_suite(cig.ks.base, origin).scalar;
  CHECK((rho - 0.5 * scalar * omega).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kr_soliton_residual: Gaussian and cigar solitons, and a failing case") {
  for (double lambda : {-1.0, 0.5, 1.0}) {
    BuiltManifold gauss = build_catalog("gaussian", {2, lambda});
    PointSampler s(gauss.ks.base.sample_box, 91);
    for (int it = 0; it < 5; ++it) {
      KrSolitonResidual r = kr_soliton_residual(gauss.ks, *gauss.soliton, s.next_point());
      CHECK(r.metric_eq < 1e-10);
      CHECK(r.lxj < 1e-12);
    }
  }

  BuiltManifold cig = build_catalog("cigar", {1, 0.0});
  PointSampler s(cig.ks.base.sample_box, 92);
  for (int it = 0; it < 5; ++it) {
    KrSolitonResidual r = kr_soliton_residual(cig.ks, *cig.soliton, s.next_point());
    CHECK(r.metric_eq < 1e-9);
    CHECK(r.lxj < 1e-12);
  }

  BuiltManifold flat = build_catalog("flat", {1, 0.0});
  SolitonDatum bogus{constant_field(Vec::Zero(2)), 1.0};
  Vec p(2);
  p << 0.3, 0.1;
  CHECK(kr_soliton_residual(flat.ks, bogus, p).metric_eq == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("Kaehler invariants: nabla J = 0, omega rank, closed Ricci form") {
  for (const char* name : {"flat", "fubini-study", "complex-hyperbolic", "cigar"}) {
    BuiltManifold bm = build_catalog(name, {1, 0.0});
    const KahlerStructure& ks = bm.ks;
    PointSampler s(ks.base.sample_box, 101);
    MatrixEval Jfield = constant_matrix_field(ks.J);
    for (int it = 0; it < 50; ++it) {
      Vec p = s.next_point();
      Tens3 nj = covariant_derivative_11(christoffel(ks.base, p), Jfield, p);
      double worst = 0.0;
      for (double v : nj.v) worst = std::max(worst, std::abs(v));
      CHECK(worst < 1e-9);

      Mat omega = jet_values(eval_at(ks.omega, p, 0), 2, 2);
      Mat g = metric_value(ks.base, p);
      CHECK(std::abs(omega.determinant()) > 1e-8 * std::abs(g.determinant()));
    }
    for (int it = 0; it < 5; ++it) CHECK(ricci_form_closedness(ks, s.next_point()) < 1e-8);
  }
}

TEST_CASE("catalog lookups") {
  CHECK_THROWS_AS(build_catalog("moebius", {1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("flat", {7, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("cigar", {2, 0.0}), std::invalid_argument);
  CHECK(build_catalog("fubini-study", {1, 0.0}).hol_curvature.value() == 4.0);
  CHECK(build_catalog("gaussian", {2, 1.0}).soliton.has_value());
}
