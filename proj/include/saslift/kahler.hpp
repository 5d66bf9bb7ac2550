#pragma once
// Kaehler base structures in real coordinates: metric from a potential or
// given explicitly, constant complex structure J, Kaehler form
// w(X,Y) = g(X,JY), a primitive 1-form tau with d_half tau = w built by
// radial homotopy, Ricci form, holomorphic sectional curvature and
// Kaehler-Ricci soliton residuals.
//
// Real-coordinate convention: coordinates are paired (x1,y1,...,xn,yn) and J
// is the block rotation J dx_i = dy_i.  The potential-to-metric map is
// g = (Hess K + J^T Hess K J) / 2, normalized so the flat potential
// K = |x|^2/2 yields the identity metric; constant-curvature catalog
// potentials are scaled to hit their holomorphic-sectional targets.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "saslift/calculus.hpp"
#include "saslift/chart.hpp"
#include "saslift/curvature.hpp"
#include "saslift/quadrature.hpp"

namespace saslift {

/// Block-diagonal rotation with J e_{2i} = e_{2i+1}, J e_{2i+1} = -e_{2i}.
inline Mat standard_complex_structure(int dim) {
  if (dim % 2 != 0 || dim < 2) throw std::invalid_argument("complex structure needs even dim >= 2");
  Mat J = Mat::Zero(dim, dim);
  for (int i = 0; i < dim / 2; ++i) {
    J(2 * i + 1, 2 * i) = 1.0;
    J(2 * i, 2 * i + 1) = -1.0;
  }
  return J;
}

/// w_ab = g_ac J^c_b as an evaluator.
inline MatrixEval omega_from_metric(MatrixEval g, Mat J, int dim) {
  return [g = std::move(g), J, dim](JetPoint q) {
    JetVec gv = g(q);
    JetVec w(dim * dim, q[0].constant_like(0.0));
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        Jet s = q[0].constant_like(0.0);
        for (int c = 0; c < dim; ++c)
          if (J(c, b) != 0.0) s += gv[a * dim + c] * J(c, b);
        w[a * dim + b] = s;
      }
    return w;
  };
}

/// Metric from a Kaehler potential.  The Hessian of K at the evaluation
/// point is reconstructed from one higher-order jet of K and composed with
/// the incoming jets, so the evaluator works for any jet point of order
/// <= kMaxJetOrder - 2.
inline MatrixEval metric_from_potential(ScalarEval K, int dim, Mat J) {
  return [K = std::move(K), dim, J](JetPoint q) -> JetVec {
    const int r = q[0].order();
    if (r + 2 > kMaxJetOrder)
      throw std::invalid_argument(
          "potential-backed metric: requested jet order needs potential derivatives beyond the "
          "supported order cap");
    Vec p0(dim);
    for (int i = 0; i < dim; ++i) p0[i] = q[i].value();
    JetVec seeds = seed_point(std::span<const double>(p0.data(), p0.size()), r + 2);
    Jet kj = K(seeds);

    // Powers of the nonconstant offsets dq_c = q_c - p0_c.
    std::vector<std::vector<Jet>> pw(dim);
    for (int c = 0; c < dim; ++c) {
      pw[c].reserve(r + 1);
      pw[c].push_back(q[0].constant_like(1.0));
      Jet dq = q[c] - p0[c];
      for (int e = 1; e <= r; ++e) pw[c].push_back(pw[c][e - 1] * dq);
    }

    const auto& lay = detail::jet_layout(dim, r);
    JetVec H(dim * dim, q[0].constant_like(0.0));
    MultiIndex m(dim);
    for (int t = 0; t < lay.size; ++t) {
      Jet mono = q[0].constant_like(1.0);
      bool first = true;
      for (int c = 0; c < dim; ++c) {
        m[c] = lay.exps[t][c];
        if (m[c] > 0) {
          mono = first ? pw[c][m[c]] : mono * pw[c][m[c]];
          first = false;
        }
      }
      for (int a = 0; a < dim; ++a)
        for (int b = a; b < dim; ++b) {
          MultiIndex mm = m;
          mm[a] += 1;
          mm[b] += 1;
          double coeff = kj.partial(mm) / lay.fact[t];
          if (coeff == 0.0) continue;
          H[a * dim + b] += mono * coeff;
        }
    }
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < a; ++b) H[a * dim + b] = H[b * dim + a];

    // g = (H + J^T H J) / 2.
    JetVec g(dim * dim, q[0].constant_like(0.0));
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        Jet s = H[a * dim + b];
        for (int c = 0; c < dim; ++c) {
          if (J(c, a) == 0.0) continue;
          for (int e = 0; e < dim; ++e)
            if (J(e, b) != 0.0) s += H[c * dim + e] * (J(c, a) * J(e, b));
        }
        g[a * dim + b] = s * 0.5;
      }
    return g;
  };
}

/// Primitive 1-form of a 2-form by radial homotopy from the chart origin:
/// tau_b(x) = 2 int_0^1 t w_{cb}(t x) x^c dt, the prefactor chosen so that
/// d_half tau = w.  Exact for polynomial w; 32-node Gauss-Legendre otherwise.
inline OneFormEval tau_primitive(MatrixEval omega, int dim) {
  return [omega = std::move(omega), dim](JetPoint q) -> JetVec {
    const QuadratureRule& quad = radial_quadrature();
    JetVec tau(dim, q[0].constant_like(0.0));
    JetVec tx(dim, q[0]);
    for (size_t k = 0; k < quad.node.size(); ++k) {
      const double t = quad.node[k];
      for (int c = 0; c < dim; ++c) tx[c] = q[c] * t;
      JetVec w = omega(tx);
      for (int b = 0; b < dim; ++b) {
        Jet s = q[0].constant_like(0.0);
        for (int c = 0; c < dim; ++c) s += w[c * dim + b] * q[c];
        tau[b] += s * (2.0 * quad.weight[k] * t);
      }
    }
    return tau;
  };
}

struct KahlerStructure {
  ChartManifold base;  // dim = 2n
  Mat J;
  MatrixEval omega;
  OneFormEval tau;            // primary, from radial homotopy
  ScalarEval potential;       // optional
  OneFormEval analytic_tau;   // optional cross-check
  int n() const { return base.dim / 2; }
};

/// Kaehler-Ricci soliton datum: field X and constant lambda in the
/// convention lambda > 0 expanding, lambda = 0 steady, lambda < 0 shrinking.
struct SolitonDatum {
  VectorEval X;
  double lambda = 0.0;
};

namespace detail {

inline void validate_kahler(const KahlerStructure& ks, int points = 8,
                            std::uint64_t seed = 0xC0FFEEull) {
  const int d = ks.base.dim;
  if ((ks.J * ks.J + Mat::Identity(d, d)).cwiseAbs().maxCoeff() != 0.0)
    throw chart_error("Kaehler validation: J^2 != -Id");
  PointSampler sampler(ks.base.sample_box, seed);
  for (int it = 0; it < points; ++it) {
    Vec p = sampler.next_point();
    Mat g = metric_value(ks.base, p);
    metric_data(g);  // SPD guard
    double herm = (ks.J.transpose() * g * ks.J - g).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
      throw chart_error("Kaehler validation: g(J.,J.) != g, residual " + std::to_string(herm));
    double closed = two_form_closedness_residual(ks.omega, p);
    if (closed > 1e-10)
      throw chart_error("Kaehler validation: d omega != 0 (input not Kaehler), residual " +
                        std::to_string(closed));
    Mat dtau = exterior_derivative_half(ks.tau, p);
    Mat w = jet_values(eval_at(ks.omega, p, 0), d, d);
    double tau_res = (dtau - w).cwiseAbs().maxCoeff();
    if (tau_res > 1e-7)
      throw chart_error("Kaehler validation: d_half tau != omega, residual " +
                        std::to_string(tau_res) + " (non-star-shaped domain?)");
  }
}

}  // namespace detail

inline KahlerStructure from_metric(MatrixEval g, Mat J, int dim, Box box) {
  KahlerStructure ks;
  ks.base.dim = dim;
  ks.base.metric = std::move(g);
  ks.base.sample_box = std::move(box);
  ks.J = std::move(J);
  ks.omega = omega_from_metric(ks.base.metric, ks.J, dim);
  ks.tau = tau_primitive(ks.omega, dim);
  detail::validate_kahler(ks);
  return ks;
}

inline KahlerStructure from_potential(ScalarEval K, int dim, Box box) {
  Mat J = standard_complex_structure(dim);
  MatrixEval g = metric_from_potential(K, dim, J);
  KahlerStructure ks = from_metric(std::move(g), std::move(J), dim, std::move(box));
  ks.potential = std::move(K);
  return ks;
}

/// Sectional curvature of the complex plane span(v, Jv) for unit v.
inline double holomorphic_sectional(const KahlerStructure& ks, const Vec& p, const Vec& v) {
  CurvatureSuite cs = curvature_suite(ks.base, p);
  double nv = v.dot(cs.g * v);
  if (std::abs(nv - 1.0) > 1e-10)
    throw std::invalid_argument("holomorphic_sectional: vector is not unit");
  return sectional(cs, v, ks.J * v);
}

/// Ricci form rho_ab = Ric(e_a, J e_b); antisymmetric on Kaehler inputs.
inline Mat ricci_form(const KahlerStructure& ks, const Vec& p) {
  CurvatureSuite cs = curvature_suite(ks.base, p);
  Mat rho = cs.ricci * ks.J;
  double scale = 1.0 + rho.cwiseAbs().maxCoeff();
  double asym = (rho + rho.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale)
    throw chart_error("ricci_form: not antisymmetric (non-Kaehler input), residual " +
                      std::to_string(asym));
  return rho;
}

struct KrSolitonResidual {
  double metric_eq = 0.0;  // max |Ric + L_X g / 2 - lambda g|
  double lxj = 0.0;        // max |L_X J|
};

inline KrSolitonResidual kr_soliton_residual(const KahlerStructure& ks, const SolitonDatum& sd,
                                             const Vec& p) {
  CurvatureSuite cs = curvature_suite(ks.base, p);
  Mat lxg = lie_derivative_02(sd.X, ks.base.metric, p);
  Mat res = cs.ricci + 0.5 * lxg - sd.lambda * cs.g;
  Mat lxj = lie_derivative_11(sd.X, constant_matrix_field(ks.J), p);
  return KrSolitonResidual{res.cwiseAbs().maxCoeff(), lxj.cwiseAbs().maxCoeff()};
}

}  // namespace saslift
