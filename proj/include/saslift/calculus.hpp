#pragma once
// Pointwise tensor calculus on evaluator fields: Lie brackets and
// derivatives, the half-convention exterior derivative, covariant
// derivatives against a chart's Levi-Civita connection, and Nijenhuis
// torsion.  All derivatives come from order-1 jet evaluations of the fields.

#include <vector>

#include "saslift/chart.hpp"
#include "saslift/conventions.hpp"
#include "saslift/curvature.hpp"

namespace saslift {

/// Values and first partials of a components evaluator at p.
/// der(a, c) = d_a of component c.
struct Jets1 {
  int dim = 0;
  Vec val;
  Mat der;  // dim x ncomp, der(a, c)
};

template <typename EvalT>
inline Jets1 first_jets(const EvalT& f, const Vec& p) {
  JetVec q = seed_point(std::span<const double>(p.data(), p.size()), 1);
  JetVec comp = f(q);
  Jets1 out;
  out.dim = static_cast<int>(p.size());
  out.val = jet_values(comp);
  out.der = Mat(out.dim, comp.size());
  for (size_t c = 0; c < comp.size(); ++c)
    for (int a = 0; a < out.dim; ++a) out.der(a, c) = comp[c].partial_derivative(a).value();
  return out;
}

/// [X, Y]^a = X^b d_b Y^a - Y^b d_b X^a.
inline Vec lie_bracket(const VectorEval& X, const VectorEval& Y, const Vec& p) {
  Jets1 jx = first_jets(X, p), jy = first_jets(Y, p);
  int d = jx.dim;
  Vec out = Vec::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out[a] += jx.val[b] * jy.der(b, a) - jy.val[b] * jx.der(b, a);
  return out;
}

/// (d alpha)_{ab} = (d_a alpha_b - d_b alpha_a) / 2 (half convention).
inline Mat exterior_derivative_half(const OneFormEval& alpha, const Vec& p) {
  Jets1 ja = first_jets(alpha, p);
  int d = ja.dim;
  Mat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      out(a, b) = conventions::kExteriorHalf * (ja.der(a, b) - ja.der(b, a));
  return out;
}

/// Max |d_a w_{bc} + d_b w_{ca} + d_c w_{ab}| over index triples; vanishes iff
/// the 2-form is closed, independent of the exterior-derivative prefactor.
inline double two_form_closedness_residual(const MatrixEval& omega, const Vec& p) {
  Jets1 jw = first_jets(omega, p);
  int d = jw.dim;
  auto dw = [&](int a, int b, int c) { return jw.der(a, b * d + c); };
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        worst = std::max(worst, std::abs(dw(a, b, c) + dw(b, c, a) + dw(c, a, b)));
  return worst;
}

/// (L_X T)_{ab} = X^c d_c T_{ab} + T_{cb} d_a X^c + T_{ac} d_b X^c.
inline Mat lie_derivative_02(const VectorEval& X, const MatrixEval& T, const Vec& p) {
  Jets1 jx = first_jets(X, p), jt = first_jets(T, p);
  int d = jx.dim;
  auto tv = [&](int a, int b) { return jt.val[a * d + b]; };
  auto dt = [&](int c, int a, int b) { return jt.der(c, a * d + b); };
  Mat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int c = 0; c < d; ++c)
        s += jx.val[c] * dt(c, a, b) + tv(c, b) * jx.der(a, c) + tv(a, c) * jx.der(b, c);
      out(a, b) = s;
    }
  return out;
}

/// (L_X S)^a_b = X^c d_c S^a_b - S^c_b d_c X^a + S^a_c d_b X^c.
inline Mat lie_derivative_11(const VectorEval& X, const MatrixEval& S, const Vec& p) {
  Jets1 jx = first_jets(X, p), js = first_jets(S, p);
  int d = jx.dim;
  auto sv = [&](int a, int b) { return js.val[a * d + b]; };
  auto ds = [&](int c, int a, int b) { return js.der(c, a * d + b); };
  Mat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int c = 0; c < d; ++c)
        s += jx.val[c] * ds(c, a, b) - sv(c, b) * jx.der(c, a) + sv(a, c) * jx.der(b, c);
      out(a, b) = s;
    }
  return out;
}

/// (L_X alpha)_b = X^c d_c alpha_b + alpha_c d_b X^c.
inline Vec lie_derivative_01(const VectorEval& X, const OneFormEval& alpha, const Vec& p) {
  Jets1 jx = first_jets(X, p), ja = first_jets(alpha, p);
  int d = jx.dim;
  Vec out = Vec::Zero(d);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c) out[b] += jx.val[c] * ja.der(c, b) + ja.val[c] * jx.der(b, c);
  return out;
}

/// (L_X alpha) as order-1 jets at p (from order-2 evaluations of X and
/// alpha), so the result can be differentiated once more, e.g. to test
/// closedness of a Lie-derived 1-form.
inline JetVec lie_derivative_01_jets(const VectorEval& X, const OneFormEval& alpha, const Vec& p) {
  JetVec q = seed_point(std::span<const double>(p.data(), p.size()), 2);
  JetVec xv = X(q), av = alpha(q);
  const int d = static_cast<int>(p.size());
  JetVec out;
  out.reserve(d);
  for (int b = 0; b < d; ++b) {
    Jet s = xv[0].constant_like(0.0).truncated(1);
    for (int c = 0; c < d; ++c)
      s += xv[c].truncated(1) * av[b].partial_derivative(c) +
           av[c].truncated(1) * xv[b].partial_derivative(c);
    out.push_back(s);
  }
  return out;
}

/// (nabla_a X)^b = d_a X^b + Gamma^b_{ac} X^c.
inline Mat covariant_derivative_10(const Tens3& gamma, const VectorEval& X, const Vec& p) {
  Jets1 jx = first_jets(X, p);
  int d = jx.dim;
  Mat out(d, d);  // out(a, b) = (nabla_a X)^b
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = jx.der(a, b);
      for (int c = 0; c < d; ++c) s += gamma(b, a, c) * jx.val[c];
      out(a, b) = s;
    }
  return out;
}

/// (nabla_a S)^b_c = d_a S^b_c + Gamma^b_{ad} S^d_c - Gamma^d_{ac} S^b_d.
inline Tens3 covariant_derivative_11(const Tens3& gamma, const MatrixEval& S, const Vec& p) {
  Jets1 js = first_jets(S, p);
  int d = js.dim;
  Tens3 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = js.der(a, b * d + c);
        for (int e = 0; e < d; ++e)
          s += gamma(b, a, e) * js.val[e * d + c] - gamma(e, a, c) * js.val[b * d + e];
        out(a, b, c) = s;
      }
  return out;
}

/// (nabla_a alpha)_b = d_a alpha_b - Gamma^c_{ab} alpha_c.
inline Mat covariant_derivative_01(const Tens3& gamma, const OneFormEval& alpha, const Vec& p) {
  Jets1 ja = first_jets(alpha, p);
  int d = ja.dim;
  Mat out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = ja.der(a, b);
      for (int c = 0; c < d; ++c) s -= gamma(c, a, b) * ja.val[c];
      out(a, b) = s;
    }
  return out;
}

/// (nabla_a T)_{bc} = d_a T_{bc} - Gamma^d_{ab} T_{dc} - Gamma^d_{ac} T_{bd}.
inline Tens3 covariant_derivative_02(const Tens3& gamma, const MatrixEval& T, const Vec& p) {
  Jets1 jt = first_jets(T, p);
  int d = jt.dim;
  Tens3 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = jt.der(a, b * d + c);
        for (int e = 0; e < d; ++e)
          s -= gamma(e, a, b) * jt.val[e * d + c] + gamma(e, a, c) * jt.val[b * d + e];
        out(a, b, c) = s;
      }
  return out;
}

/// Nijenhuis torsion N_S(X,Y) = S^2[X,Y] + [SX,SY] - S([SX,Y] + [X,SY]) for
/// tangent vectors X, Y extended as constant-coefficient vector fields, so
/// [X,Y] = 0 and the remaining brackets reduce to first derivatives of S.
inline Vec nijenhuis(const MatrixEval& S, const Vec& X, const Vec& Y, const Vec& p) {
  Jets1 js = first_jets(S, p);
  int d = static_cast<int>(p.size());
  auto sv = [&](int a, int b) { return js.val[a * d + b]; };
  auto ds = [&](int c, int a, int b) { return js.der(c, a * d + b); };
  Vec SX = Vec::Zero(d), SY = Vec::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      SX[a] += sv(a, b) * X[b];
      SY[a] += sv(a, b) * Y[b];
    }
  // [SX, SY]^a = (SX)^b d_b (SY)^a - (SY)^b d_b (SX)^a, with
  // d_b (SY)^a = (d_b S^a_c) Y^c for the constant extension of Y.
  Vec br_ss = Vec::Zero(d), br_sx_y = Vec::Zero(d), br_x_sy = Vec::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        br_ss[a] += SX[b] * ds(b, a, c) * Y[c] - SY[b] * ds(b, a, c) * X[c];
        br_sx_y[a] += -Y[b] * ds(b, a, c) * X[c];
        br_x_sy[a] += X[b] * ds(b, a, c) * Y[c];
      }
  Vec inner = br_sx_y + br_x_sy;
  Vec out = br_ss;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out[a] -= sv(a, b) * inner[b];
  return out;
}

}  // namespace saslift
