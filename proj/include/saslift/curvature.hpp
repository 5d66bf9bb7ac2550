#pragma once
// Levi-Civita connection and curvature from a jet-evaluable metric.  The
// whole assembly runs in jet arithmetic, so the same code yields curvature
// values (order 0) and curvature fields differentiable to any remaining jet
// order; partial derivatives of jets lower the order by one.
//
// Conventions are pinned in conventions.hpp:
//   Gamma^k_{ij} = g^{kl}(d_i g_{jl} + d_j g_{il} - d_l g_{ij}) / 2
//   R^l_{ijk}    = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//                  + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
//   Ric_{jk}     = R^i_{ijk},   s = g^{jk} Ric_{jk}.

#include <cmath>
#include <vector>

#include "saslift/chart.hpp"
#include "saslift/jet.hpp"

namespace saslift {

inline int idx3(int d, int a, int b, int c) { return (a * d + b) * d + c; }
inline int idx4(int d, int a, int b, int c, int e) { return ((a * d + b) * d + c) * d + e; }

/// Inverse of a jet-valued matrix by Gauss-Jordan elimination with pivoting
/// on constant terms.  Valid whenever the constant-term matrix is invertible.
inline JetVec jet_matrix_inverse(const JetVec& a, int d) {
  JetVec A = a;
  JetVec I(d * d, a[0].constant_like(0.0));
  for (int i = 0; i < d; ++i) I[i * d + i] = a[0].constant_like(1.0);
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(A[r * d + col].value()) > std::abs(A[piv * d + col].value())) piv = r;
    if (A[piv * d + col].value() == 0.0)
      throw chart_error("jet matrix inverse: singular constant term");
    if (piv != col)
      for (int c = 0; c < d; ++c) {
        std::swap(A[piv * d + c], A[col * d + c]);
        std::swap(I[piv * d + c], I[col * d + c]);
      }
    Jet inv_p = reciprocal(A[col * d + col]);
    for (int c = 0; c < d; ++c) {
      A[col * d + c] = A[col * d + c] * inv_p;
      I[col * d + c] = I[col * d + c] * inv_p;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      Jet f = A[r * d + col];
      for (int c = 0; c < d; ++c) {
        A[r * d + c] = A[r * d + c] - f * A[col * d + c];
        I[r * d + c] = I[r * d + c] - f * I[col * d + c];
      }
    }
  }
  return I;
}

struct CurvatureJets {
  int dim = 0;
  int order = 0;
  JetVec g;        // d*d, at `order`
  JetVec ginv;     // d*d
  JetVec gamma;    // d^3, (k,i,j)
  JetVec riemann;  // d^4, (l,i,j,k)
  JetVec ricci;    // d*d
  Jet scalar;
};

/// Connection and curvature as jets of the requested order at p.  Requires the
/// metric to be jet-evaluable at order + 2.
inline CurvatureJets curvature_jets(const ChartManifold& m, const Vec& p, int order) {
  const int d = m.dim;
  CurvatureJets out;
  out.dim = d;
  out.order = order;

  JetVec g2 = eval_at(m.metric, p, order + 2);  // metric at order + 2
  JetVec g1(d * d), dg(d * d * d);               // metric and d(metric) at order + 1
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      g1[i * d + j] = g2[i * d + j].truncated(order + 1);
      for (int k = 0; k < d; ++k) dg[idx3(d, k, i, j)] = g2[i * d + j].partial_derivative(k);
    }

  // Guard: the constant-term metric must be well conditioned.
  metric_data(jet_values(g2, d, d));

  JetVec ginv1 = jet_matrix_inverse(g1, d);  // at order + 1

  // Gamma at order + 1 needs metric derivatives at order + 1; dg above is at
  // that order already.  Assemble Gamma and keep both the order+1 version
  // (for d Gamma) and the truncation to `order` (for Gamma * Gamma).
  JetVec gamma_hi(d * d * d, g1[0].constant_like(0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Jet s = g1[0].constant_like(0.0);
        for (int l = 0; l < d; ++l)
          s += ginv1[k * d + l] * (dg[idx3(d, i, j, l)] + dg[idx3(d, j, i, l)] - dg[idx3(d, l, i, j)]);
        s = s * 0.5;
        gamma_hi[idx3(d, k, i, j)] = s;
        gamma_hi[idx3(d, k, j, i)] = s;
      }

  JetVec gamma(d * d * d);
  for (int t = 0; t < d * d * d; ++t) gamma[t] = gamma_hi[t].truncated(order);

  JetVec riem(d * d * d * d, gamma[0].constant_like(0.0));
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          Jet r = gamma_hi[idx3(d, l, j, k)].partial_derivative(i) -
                  gamma_hi[idx3(d, l, i, k)].partial_derivative(j);
          for (int mm = 0; mm < d; ++mm)
            r += gamma[idx3(d, l, i, mm)] * gamma[idx3(d, mm, j, k)] -
                 gamma[idx3(d, l, j, mm)] * gamma[idx3(d, mm, i, k)];
          riem[idx4(d, l, i, j, k)] = r;
        }

  JetVec ric(d * d, gamma[0].constant_like(0.0));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      Jet s = gamma[0].constant_like(0.0);
      for (int i = 0; i < d; ++i) s += riem[idx4(d, i, i, j, k)];
      ric[j * d + k] = s;
    }

  JetVec ginv(d * d);
  for (int t = 0; t < d * d; ++t) ginv[t] = ginv1[t].truncated(order);
  Jet sc = gamma[0].constant_like(0.0);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) sc += ginv[j * d + k] * ric[j * d + k];

  out.g.resize(d * d);
  for (int t = 0; t < d * d; ++t) out.g[t] = g1[t].truncated(order);
  out.ginv = std::move(ginv);
  out.gamma = std::move(gamma);
  out.riemann = std::move(riem);
  out.ricci = std::move(ric);
  out.scalar = sc;
  return out;
}

// ---------------------------------------------------------------------------
// Plain double-valued results.

struct Tens3 {
  int d = 0;
  std::vector<double> v;
  Tens3() = default;
  explicit Tens3(int dim) : d(dim), v(dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c) { return v[idx3(d, a, b, c)]; }
  double operator()(int a, int b, int c) const { return v[idx3(d, a, b, c)]; }
};

struct Tens4 {
  int d = 0;
  std::vector<double> v;
  Tens4() = default;
  explicit Tens4(int dim) : d(dim), v(dim * dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c, int e) { return v[idx4(d, a, b, c, e)]; }
  double operator()(int a, int b, int c, int e) const { return v[idx4(d, a, b, c, e)]; }
};

struct CurvatureSuite {
  int dim = 0;
  Mat g, ginv;
  Tens3 gamma;    // Gamma^k_{ij}
  Tens4 riemann;  // R^l_{ijk}
  Tens4 rm;       // Rm(i,j,k,l) = g(R(e_i,e_j)e_k, e_l)
  Mat ricci;
  double scalar = 0.0;
};

inline Tens3 christoffel(const ChartManifold& m, const Vec& p) {
  const int d = m.dim;
  JetVec g1 = eval_at(m.metric, p, 1);
  metric_data(jet_values(g1, d, d));
  JetVec ginv = jet_matrix_inverse(g1, d);
  Tens3 gamma(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += ginv[k * d + l].value() *
               (g1[j * d + l].partial_derivative(i).value() +
                g1[i * d + l].partial_derivative(j).value() -
                g1[i * d + j].partial_derivative(l).value());
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = gamma(k, i, j);
      }
  return gamma;
}

inline CurvatureSuite curvature_suite(const ChartManifold& m, const Vec& p) {
  CurvatureJets cj = curvature_jets(m, p, 0);
  const int d = cj.dim;
  CurvatureSuite out;
  out.dim = d;
  out.g = jet_values(cj.g, d, d);
  out.ginv = jet_values(cj.ginv, d, d);
  out.gamma = Tens3(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.gamma(k, i, j) = cj.gamma[idx3(d, k, i, j)].value();
  out.riemann = Tens4(d);
  for (int t = 0; t < d * d * d * d; ++t) out.riemann.v[t] = cj.riemann[t].value();
  out.rm = Tens4(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int mm = 0; mm < d; ++mm) s += out.g(mm, l) * out.riemann(mm, i, j, k);
          out.rm(i, j, k, l) = s;
        }
  out.ricci = jet_values(cj.ricci, d, d);
  out.scalar = cj.scalar.value();
  return out;
}

/// Sectional curvature of span(u, v): K = Rm(u,v,v,u) / (|u|^2 |v|^2 - g(u,v)^2).
inline double sectional(const CurvatureSuite& cs, const Vec& u, const Vec& v) {
  const int d = cs.dim;
  double num = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) num += cs.rm(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
  double uu = u.dot(cs.g * u), vv = v.dot(cs.g * v), uv = u.dot(cs.g * v);
  double den = uu * vv - uv * uv;
  if (den < 1e-12 * uu * vv) throw chart_error("sectional: degenerate plane");
  return num / den;
}

inline double sectional(const ChartManifold& m, const Vec& p, const Vec& u, const Vec& v) {
  return sectional(curvature_suite(m, p), u, v);
}

/// Max residual of the cyclic sum nabla_m R^l_{ijk} + nabla_i R^l_{jmk}
/// + nabla_j R^l_{mik}, normalized by (max |R| + 1).  Needs order-3 metric jets.
inline double second_bianchi_residual(const ChartManifold& m, const Vec& p) {
  CurvatureJets cj = curvature_jets(m, p, 1);
  const int d = cj.dim;
  // nabla R at the point, from the order-1 curvature jets.
  Tens4 r0(d);
  for (int t = 0; t < d * d * d * d; ++t) r0.v[t] = cj.riemann[t].value();
  auto gamma0 = [&](int k, int i, int j) { return cj.gamma[idx3(d, k, i, j)].value(); };
  std::vector<double> nr(d * d * d * d * d, 0.0);
  auto nr_at = [&](int mm, int l, int i, int j, int k) -> double& {
    return nr[(((mm * d + l) * d + i) * d + j) * d + k];
  };
  for (int mm = 0; mm < d; ++mm)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            double s = cj.riemann[idx4(d, l, i, j, k)].partial_derivative(mm).value();
            for (int a = 0; a < d; ++a) {
              s += gamma0(l, mm, a) * r0(a, i, j, k);
              s -= gamma0(a, mm, i) * r0(l, a, j, k);
              s -= gamma0(a, mm, j) * r0(l, i, a, k);
              s -= gamma0(a, mm, k) * r0(l, i, j, a);
            }
            nr_at(mm, l, i, j, k) = s;
          }
  double scale = 1.0;
  for (double x : r0.v) scale = std::max(scale, 1.0 + std::abs(x));
  double worst = 0.0;
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int mm = 0; mm < d; ++mm) {
            double cyc = nr_at(mm, l, i, j, k) + nr_at(i, l, j, mm, k) + nr_at(j, l, mm, i, k);
            worst = std::max(worst, std::abs(cyc) / scale);
          }
  return worst;
}

}  // namespace saslift
