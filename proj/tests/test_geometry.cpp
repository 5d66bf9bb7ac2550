#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "saslift/calculus.hpp"
#include "saslift/chart.hpp"
#include "saslift/curvature.hpp"

using namespace saslift;

namespace {

ChartManifold euclidean2() {
  ChartManifold m;
  m.dim = 2;
  m.metric = [](JetPoint q) {
    JetVec g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g.push_back(q[0].constant_like(i == j ? 1.0 : 0.0));
    return g;
  };
  m.sample_box = Box::centered(2, 1.0);
  return m;
}

// Conformal metric delta / (1 + x^2 + y^2).
ChartManifold conformal2() {
  ChartManifold m;
  m.dim = 2;
  m.metric = [](JetPoint q) {
    Jet h = 1.0 / (1.0 + q[0] * q[0] + q[1] * q[1]);
    JetVec g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g.push_back(i == j ? h : q[0].constant_like(0.0));
    return g;
  };
  m.sample_box = Box::centered(2, 1.0);
  return m;
}

// Fubini-Study chart on CP^1 with holomorphic sectional curvature 4.
ChartManifold fubini_study2() {
  ChartManifold m;
  m.dim = 2;
  m.metric = [](JetPoint q) {
    Jet d = 1.0 + q[0] * q[0] + q[1] * q[1];
    Jet h = 1.0 / (d * d);
    JetVec g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g.push_back(i == j ? h : q[0].constant_like(0.0));
    return g;
  };
  m.sample_box = Box::centered(2, 0.7);
  return m;
}

// Round unit 2-sphere in spherical coordinates (theta, phi).
ChartManifold sphere_chart() {
  ChartManifold m;
  m.dim = 2;
  m.metric = [](JetPoint q) {
    Jet s = sin(q[0]);
    JetVec g;
    g.push_back(q[0].constant_like(1.0));
    g.push_back(q[0].constant_like(0.0));
    g.push_back(q[0].constant_like(0.0));
    g.push_back(s * s);
    return g;
  };
  Box b;
  b.lo = Vec(2);
  b.hi = Vec(2);
  b.lo << 0.6, -1.0;
  b.hi << 2.5, 1.0;
  m.sample_box = b;
  return m;
}

// Finite-difference Christoffel oracle, independent of the jet engine.
Tens3 christoffel_fd(const ChartManifold& m, const Vec& p, double h = 1e-5) {
  int d = m.dim;
  auto gv = [&](const Vec& x) { return metric_value(m, x); };
  Mat ginv = gv(p).inverse();
  std::vector<Mat> dg(d);
  for (int k = 0; k < d; ++k) {
    Vec a = p, b = p;
    a[k] += h;
    b[k] -= h;
    dg[k] = (gv(a) - gv(b)) / (2.0 * h);
  }
  Tens3 gamma(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

// Finite-difference scalar curvature oracle built on the FD Christoffels.
double scalar_curvature_fd(const ChartManifold& m, const Vec& p, double h = 1e-4) {
  int d = m.dim;
  Tens3 g0 = christoffel_fd(m, p);
  std::vector<Tens3> dgamma(d, Tens3(d));
  for (int k = 0; k < d; ++k) {
    Vec a = p, b = p;
    a[k] += h;
    b[k] -= h;
    Tens3 ga = christoffel_fd(m, a), gb = christoffel_fd(m, b);
    for (size_t t = 0; t < ga.v.size(); ++t) dgamma[k].v[t] = (ga.v[t] - gb.v[t]) / (2.0 * h);
  }
  Mat ric(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        s += dgamma[i](i, j, k) - dgamma[j](i, i, k);
        for (int mm = 0; mm < d; ++mm)
          s += g0(i, i, mm) * g0(mm, j, k) - g0(i, j, mm) * g0(mm, i, k);
      }
      ric(j, k) = s;
    }
  Mat ginv = metric_value(m, p).inverse();
  return (ginv * ric).trace();
}

}  // namespace

TEST_CASE("christoffel: flat metric has vanishing symbols") {
  ChartManifold m = euclidean2();
  PointSampler s(m.sample_box, 11);
  for (int it = 0; it < 5; ++it) {
    Tens3 g = christoffel(m, s.next_point());
    for (double v : g.v) CHECK(v == 0.0);
  }
}

TEST_CASE("christoffel: conformal metric matches the closed-form oracle") {
  ChartManifold m = conformal2();
  Vec p(2);
  p << 1.0, 0.0;
  double r2 = p.squaredNorm();
  Vec dlogh = -2.0 * p / (1.0 + r2);  // d log h for h = 1/(1+r^2)
  Tens3 g = christoffel(m, p);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK(g(a, b, c) ==
              Catch::Approx(oracles::conformal_christoffel(dlogh, a, b, c)).margin(1e-12));
  CHECK(g(0, 0, 0) == Catch::Approx(-0.5).margin(1e-13));  // -x/(1+r^2) at (1,0)
}

TEST_CASE("christoffel: round sphere chart matches the textbook formula and FD") {
  ChartManifold m = sphere_chart();
  PointSampler s(m.sample_box, 7);
  for (int it = 0; it < 4; ++it) {
    Vec p = s.next_point();
    Tens3 g = christoffel(m, p);
    CHECK(g(0, 1, 1) == Catch::Approx(-std::sin(p[0]) * std::cos(p[0])).margin(1e-12));
    Tens3 fd = christoffel_fd(m, p);
    for (size_t t = 0; t < g.v.size(); ++t) CHECK(g.v[t] == Catch::Approx(fd.v[t]).margin(1e-7));
  }
}

TEST_CASE("curvature_suite: flat, Fubini-Study and cigar scalar curvatures") {
  ChartManifold flat = euclidean2();
  Vec p(2);
  p << 0.3, -0.4;
  CurvatureSuite cs = curvature_suite(flat, p);
  for (double v : cs.riemann.v) CHECK(v == 0.0);
  CHECK(cs.scalar == 0.0);

  ChartManifold fs = fubini_study2();
  PointSampler s(fs.sample_box, 3);
  for (int it = 0; it < 5; ++it) {
    Vec q = s.next_point();
    CHECK(curvature_suite(fs, q).scalar == Catch::Approx(8.0).margin(1e-10));
  }
  CHECK(curvature_suite(fs, p).scalar == Catch::Approx(scalar_curvature_fd(fs, p)).margin(1e-4));

  ChartManifold cig = conformal2();
  Vec origin = Vec::Zero(2);
  CHECK(curvature_suite(cig, origin).scalar == Catch::Approx(4.0).margin(1e-11));
  CHECK(curvature_suite(cig, p).scalar ==
        Catch::Approx(scalar_curvature_fd(cig, p)).margin(1e-4));
}

TEST_CASE("sectional curvature: flat planes vanish, round sphere gives 1") {
  ChartManifold flat = euclidean2();
  Vec p(2), u(2), v(2);
  p << 0.2, 0.9;
  u << 1.0, 0.3;
  v << -0.2, 1.1;
  CHECK(sectional(flat, p, u, v) == Catch::Approx(0.0).margin(1e-14));

  ChartManifold sph = sphere_chart();
  PointSampler s(sph.sample_box, 5);
  for (int it = 0; it < 4; ++it) {
    Vec q = s.next_point();
    Vec a = s.next_vector(2), b = s.next_vector(2);
    CHECK(sectional(sph, q, a, b) == Catch::Approx(1.0).margin(1e-10));
  }

  Vec collinear = 2.0 * u;
  CHECK_THROWS_AS(sectional(flat, p, u, collinear), chart_error);
}

TEST_CASE("lie_bracket examples") {
  Vec p(2);
  p << 1.0, 2.0;
  VectorEval X = [](JetPoint q) { return JetVec{q[0].constant_like(0.0), q[0]}; };  // x d_y
  VectorEval Y = [](JetPoint q) { return JetVec{q[1], q[0].constant_like(0.0)}; };  // y d_x
  Vec br = lie_bracket(X, Y, p);
  CHECK(br[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(br[1] == Catch::Approx(-2.0).margin(1e-14));

  VectorEval dx = constant_field((Vec(2) << 1, 0).finished());
  VectorEval dy = constant_field((Vec(2) << 0, 1).finished());
  CHECK(lie_bracket(dx, dy, p).cwiseAbs().maxCoeff() == 0.0);

  VectorEval W = [](JetPoint q) { return JetVec{q[0] * q[1], q[1] * q[1] + 1.0}; };
  CHECK(lie_bracket(W, W, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exterior_derivative_half: exact forms close, x dy gives 1/2") {
  Vec p(2);
  p << 0.7, -0.2;
  // alpha = df for f = x^2 y + exp(x): components (2xy + exp(x), x^2).
  OneFormEval df = [](JetPoint q) {
    return JetVec{q[0] * q[1] * 2.0 + exp(q[0]), q[0] * q[0]};
  };
  CHECK(exterior_derivative_half(df, p).cwiseAbs().maxCoeff() < 1e-13);

  OneFormEval xdy = [](JetPoint q) { return JetVec{q[0].constant_like(0.0), q[0]}; };
  Mat d = exterior_derivative_half(xdy, p);
  CHECK(d(0, 1) == Catch::Approx(0.5).margin(1e-14));
  CHECK(d(1, 0) == Catch::Approx(-0.5).margin(1e-14));
}

TEST_CASE("lie_derivative of the metric: zero, Euler and rotation fields") {
  ChartManifold m = euclidean2();
  Vec p(2);
  p << 0.4, 1.1;
  VectorEval zero = constant_field(Vec::Zero(2));
  CHECK(lie_derivative_02(zero, m.metric, p).cwiseAbs().maxCoeff() == 0.0);

  VectorEval euler = [](JetPoint q) { return JetVec{q[0], q[1]}; };
  Mat le = lie_derivative_02(euler, m.metric, p);
  CHECK((le - 2.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  VectorEval rot = [](JetPoint q) { return JetVec{-q[1], q[0]}; };
  CHECK(lie_derivative_02(rot, m.metric, p).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("covariant derivatives: identity tensor, metric and constant J") {
  ChartManifold m = conformal2();
  Vec p(2);
  p << 0.5, -0.3;
  Tens3 gamma = christoffel(m, p);

  MatrixEval id = constant_matrix_field(Mat::Identity(2, 2));
  Tens3 nid = covariant_derivative_11(gamma, id, p);
  for (double v : nid.v) CHECK(std::abs(v) < 1e-14);

  Tens3 ng = covariant_derivative_02(gamma, m.metric, p);
  for (double v : ng.v) CHECK(std::abs(v) < 1e-11);

  ChartManifold flat = euclidean2();
  Mat J(2, 2);
  J << 0, -1, 1, 0;
  Tens3 nj = covariant_derivative_11(christoffel(flat, p), constant_matrix_field(J), p);
  for (double v : nj.v) CHECK(v == 0.0);
}

TEST_CASE("nijenhuis torsion of the identity and of constant J vanish") {
  Vec p(2), X(2), Y(2);
  p << 0.3, 0.8;
  X << 1.0, -0.5;
  Y << 0.4, 1.2;
  MatrixEval id = constant_matrix_field(Mat::Identity(2, 2));
  CHECK(nijenhuis(id, X, Y, p).cwiseAbs().maxCoeff() == 0.0);
  Mat J(2, 2);
  J << 0, -1, 1, 0;
  CHECK(nijenhuis(constant_matrix_field(J), X, Y, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("curvature suite invariants hold on every test manifold") {
  std::vector<ChartManifold> manifolds = {euclidean2(), conformal2(), fubini_study2(),
                                          sphere_chart()};
  for (size_t mi = 0; mi < manifolds.size(); ++mi) {
    const ChartManifold& m = manifolds[mi];
    PointSampler s(m.sample_box, 40 + mi);
    for (int it = 0; it < 50; ++it) {
      Vec p = s.next_point();
      CurvatureSuite cs = curvature_suite(m, p);
      int d = cs.dim;
      double scale = 1.0;
      for (double v : cs.rm.v) scale = std::max(scale, 1.0 + std::abs(v));
      double worst = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            worst = std::max(worst, std::abs(cs.gamma(k, i, j) - cs.gamma(k, j, i)));
            for (int l = 0; l < d; ++l) {
              worst = std::max(worst, std::abs(cs.rm(i, j, k, l) + cs.rm(j, i, k, l)));
              worst = std::max(worst, std::abs(cs.rm(i, j, k, l) + cs.rm(i, j, l, k)));
              worst = std::max(worst, std::abs(cs.rm(i, j, k, l) - cs.rm(k, l, i, j)));
              // First Bianchi identity.
              worst = std::max(
                  worst, std::abs(cs.rm(i, j, k, l) + cs.rm(j, k, i, l) + cs.rm(k, i, j, l)));
            }
          }
      CHECK(worst / scale < 1e-9);
      CHECK(std::abs(cs.scalar - (cs.ginv * cs.ricci).trace()) < 1e-9 * scale);
      CHECK((cs.ricci - cs.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-9 * scale);
    }
  }
}

TEST_CASE("second Bianchi identity residual is tiny") {
  std::vector<ChartManifold> manifolds = {euclidean2(), conformal2(), fubini_study2(),
                                          sphere_chart()};
  for (size_t mi = 0; mi < manifolds.size(); ++mi) {
    PointSampler s(manifolds[mi].sample_box, 90 + mi);
    for (int it = 0; it < 10; ++it)
      CHECK(second_bianchi_residual(manifolds[mi], s.next_point()) < 1e-8);
  }
}

TEST_CASE("orthonormal frames satisfy their invariant") {
  std::vector<ChartManifold> manifolds = {conformal2(), fubini_study2(), sphere_chart()};
  for (size_t mi = 0; mi < manifolds.size(); ++mi) {
    PointSampler s(manifolds[mi].sample_box, 17 + mi);
    for (int it = 0; it < 10; ++it) {
      Vec p = s.next_point();
      Mat g = metric_value(manifolds[mi], p);
      PointFrame f = orthonormal_frame(g, p);
      CHECK(frame_orthonormality_residual(g, f) < 1e-10);
    }
  }
}

TEST_CASE("singular metric points are reported as chart degeneracies") {
  ChartManifold m;
  m.dim = 2;
  m.metric = [](JetPoint q) {
    JetVec g;
    g.push_back(q[0] * q[0]);  // degenerate at x = 0
    g.push_back(q[0].constant_like(0.0));
    g.push_back(q[0].constant_like(0.0));
    g.push_back(q[0].constant_like(1.0));
    return g;
  };
  m.sample_box = Box::centered(2, 1.0);
  Vec p = Vec::Zero(2);
  CHECK_THROWS_AS(curvature_suite(m, p), chart_error);
}
