#pragma once
// Built-in Kaehler bases: flat C^n, Fubini-Study CP^n (holomorphic sectional
// curvature 4), complex hyperbolic CH^n (-4), the Gaussian soliton on flat
// C^n and the cigar soliton on C^1.  Every entry carries a closed-form
// metric evaluator (jet-evaluable to full order), its potential where one
// exists as an elementary function, a safe sampling box inside the chart
// domain, and registered symmetry fields.
//
// Catalog construction cross-checks the closed-form metric against the
// potential-derived metric and validates all Kaehler invariants before the
// entry is handed out.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "saslift/kahler.hpp"

namespace saslift {

struct CatalogParams {
  int n = 1;            // complex dimension of the base
  double lambda = 1.0;  // soliton constant where applicable
};

struct BuiltManifold {
  std::string name;
  KahlerStructure ks;
  std::optional<SolitonDatum> soliton;
  std::vector<std::pair<std::string, VectorEval>> symmetry_fields;
  std::optional<double> hol_curvature;     // constant holomorphic sectional curvature
  std::optional<double> einstein_constant; // Ric = c g when present
};

struct CatalogEntry {
  std::string name;
  std::string notes;
  std::function<BuiltManifold(const CatalogParams&)> builder;
};

namespace detail {

inline VectorEval rotation_field(const Mat& J) {
  int d = static_cast<int>(J.rows());
  return [J, d](JetPoint q) {
    JetVec v(d, q[0].constant_like(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (J(a, b) != 0.0) v[a] += q[b] * J(a, b);
    return v;
  };
}

inline VectorEval euler_field(int d, double scale = 1.0) {
  return [d, scale](JetPoint q) {
    JetVec v;
    v.reserve(d);
    for (int a = 0; a < d; ++a) v.push_back(q[a] * scale);
    return v;
  };
}

inline ScalarEval flat_potential(int d) {
  return [d](JetPoint q) {
    Jet s = q[0].constant_like(0.0);
    for (int a = 0; a < d; ++a) s += q[a] * q[a];
    return s * 0.5;
  };
}

inline ScalarEval fs_potential(int d) {
  return [d](JetPoint q) {
    Jet s = q[0].constant_like(1.0);
    for (int a = 0; a < d; ++a) s += q[a] * q[a];
    return log(s) * 0.5;
  };
}

inline ScalarEval ch_potential(int d) {
  return [d](JetPoint q) {
    Jet s = q[0].constant_like(1.0);
    for (int a = 0; a < d; ++a) s -= q[a] * q[a];
    return log(s) * (-0.5);
  };
}

/// delta/(1 + eps r^2) + eps (x x^T + Jx Jx^T)/(1 + eps r^2)^2 with eps = +1
/// giving Fubini-Study (hol. curvature 4... for eps = -1 read 1 - r^2) and
/// eps = -1 complex hyperbolic.
inline MatrixEval space_form_metric(int d, Mat J, double eps) {
  return [d, J, eps](JetPoint q) {
    Jet r2 = q[0].constant_like(0.0);
    for (int a = 0; a < d; ++a) r2 += q[a] * q[a];
    Jet A = 1.0 / (1.0 + eps * r2);
    Jet A2 = A * A;
    JetVec jx(d, q[0].constant_like(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (J(a, b) != 0.0) jx[a] += q[b] * J(a, b);
    JetVec g(d * d, q[0].constant_like(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        Jet v = (q[a] * q[b] + jx[a] * jx[b]) * A2 * (-eps);
        if (a == b) v += A;
        g[a * d + b] = v;
        g[b * d + a] = g[a * d + b];
      }
    return g;
  };
}

inline MatrixEval cigar_metric() {
  return [](JetPoint q) {
    Jet h = 1.0 / (1.0 + q[0] * q[0] + q[1] * q[1]);
    JetVec g(4, q[0].constant_like(0.0));
    g[0] = h;
    g[3] = h;
    return g;
  };
}

/// Closed-form metric must agree with the potential-derived one; this is the
/// catalog's construction-time cross-check of the potential convention.
inline void check_against_potential(const KahlerStructure& ks) {
  if (!ks.potential) return;
  MatrixEval from_pot = metric_from_potential(ks.potential, ks.base.dim, ks.J);
  PointSampler s(ks.base.sample_box, 0xFACEull);
  for (int it = 0; it < 4; ++it) {
    Vec p = s.next_point();
    Mat a = jet_values(eval_at(ks.base.metric, p, 0), ks.base.dim, ks.base.dim);
    Mat b = jet_values(eval_at(from_pot, p, 0), ks.base.dim, ks.base.dim);
    if ((a - b).cwiseAbs().maxCoeff() > 1e-9)
      throw chart_error("catalog: closed-form metric disagrees with potential-derived metric");
  }
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;

    out.push_back(CatalogEntry{
        "flat",
        "flat Kaehler C^n; lift is the standard Sasakian structure with phi-sectional "
        "curvature -3",
        [](const CatalogParams& cp) {
          int d = 2 * cp.n;
          Mat J = standard_complex_structure(d);
          KahlerStructure ks = from_metric(constant_matrix_field(Mat::Identity(d, d)), J, d,
                                           Box::centered(d, 1.0));
          ks.potential = detail::flat_potential(d);
          // tau for a constant omega is linear: tau_b = omega_cb x^c.
          Mat omega0 = Mat::Identity(d, d) * J;
          ks.analytic_tau = [omega0, d](JetPoint q) {
            JetVec t(d, q[0].constant_like(0.0));
            for (int b = 0; b < d; ++b)
              for (int c = 0; c < d; ++c)
                if (omega0(c, b) != 0.0) t[b] += q[c] * omega0(c, b);
            return t;
          };
          detail::check_against_potential(ks);
          BuiltManifold bm;
          bm.name = "flat";
          bm.ks = std::move(ks);
          bm.symmetry_fields = {{"rotation", detail::rotation_field(J)},
                                {"euler", detail::euler_field(d)}};
          bm.hol_curvature = 0.0;
          bm.einstein_constant = 0.0;
          return bm;
        }});

    out.push_back(CatalogEntry{
        "fubini-study",
        "Fubini-Study CP^n with holomorphic sectional curvature 4; Einstein constant 2n+2; "
        "lift is locally the unit sphere",
        [](const CatalogParams& cp) {
          int d = 2 * cp.n;
          Mat J = standard_complex_structure(d);
          KahlerStructure ks = from_metric(detail::space_form_metric(d, J, +1.0), J, d,
                                           Box::centered(d, 0.7));
          ks.potential = detail::fs_potential(d);
          detail::check_against_potential(ks);
          BuiltManifold bm;
          bm.name = "fubini-study";
          bm.ks = std::move(ks);
          bm.symmetry_fields = {{"rotation", detail::rotation_field(J)}};
          bm.hol_curvature = 4.0;
          bm.einstein_constant = 2.0 * cp.n + 2.0;
          return bm;
        }});

    out.push_back(CatalogEntry{
        "complex-hyperbolic",
        "complex hyperbolic CH^n with holomorphic sectional curvature -4; Einstein constant "
        "-(2n+2)",
        [](const CatalogParams& cp) {
          int d = 2 * cp.n;
          Mat J = standard_complex_structure(d);
          double hw = 0.6 / std::sqrt(static_cast<double>(d));
          KahlerStructure ks =
              from_metric(detail::space_form_metric(d, J, -1.0), J, d, Box::centered(d, hw));
          ks.potential = detail::ch_potential(d);
          detail::check_against_potential(ks);
          BuiltManifold bm;
          bm.name = "complex-hyperbolic";
          bm.ks = std::move(ks);
          bm.symmetry_fields = {{"rotation", detail::rotation_field(J)}};
          bm.hol_curvature = -4.0;
          bm.einstein_constant = -(2.0 * cp.n + 2.0);
          return bm;
        }});

    out.push_back(CatalogEntry{
        "gaussian",
        "Gaussian soliton: flat C^n with X = lambda * Euler field, Ric + L_X g / 2 = lambda g "
        "for every lambda",
        [](const CatalogParams& cp) {
          int d = 2 * cp.n;
          Mat J = standard_complex_structure(d);
          KahlerStructure ks = from_metric(constant_matrix_field(Mat::Identity(d, d)), J, d,
                                           Box::centered(d, 1.0));
          ks.potential = detail::flat_potential(d);
          detail::check_against_potential(ks);
          BuiltManifold bm;
          bm.name = "gaussian";
          bm.ks = std::move(ks);
          bm.soliton = SolitonDatum{detail::euler_field(d, cp.lambda), cp.lambda};
          bm.symmetry_fields = {{"rotation", detail::rotation_field(J)},
                                {"euler", detail::euler_field(d)}};
          bm.hol_curvature = 0.0;
          bm.einstein_constant = 0.0;
          return bm;
        }});

    out.push_back(CatalogEntry{
        "cigar",
        "cigar steady soliton on C^1: g = delta/(1+r^2), X = -2 * Euler field = grad(-log(1+r^2)), "
        "lambda = 0",
        [](const CatalogParams& cp) {
          if (cp.n != 1)
            throw std::invalid_argument("cigar: only defined for n = 1");
          Mat J = standard_complex_structure(2);
          KahlerStructure ks = from_metric(detail::cigar_metric(), J, 2, Box::centered(2, 1.0));
          BuiltManifold bm;
          bm.name = "cigar";
          bm.ks = std::move(ks);
          bm.soliton = SolitonDatum{detail::euler_field(2, -2.0), 0.0};
          bm.symmetry_fields = {{"rotation", detail::rotation_field(J)}};
          return bm;
        }});

    return out;
  }();
  return entries;
}

inline BuiltManifold build_catalog(const std::string& name, const CatalogParams& cp) {
  if (cp.n < 1 || cp.n > 4)
    throw std::invalid_argument("catalog: n must be in [1, 4], got " + std::to_string(cp.n));
  for (const CatalogEntry& e : catalog())
    if (e.name == name) return e.builder(cp);
  throw std::invalid_argument("catalog: unknown manifold '" + name + "'");
}

}  // namespace saslift
