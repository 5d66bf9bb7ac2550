#pragma once
// Twisted eta-Ricci solitons on almost contact metric structures:
//
//   Ric + L_X g / 2 = lambda g + 2 C1 (alpha_X . eta) + C2 eta (x) eta,
//   alpha_X = L_X eta,  eta(X) = 0,
//
// with the symmetric product (a . b) = (a (x) b + b (x) a)/2.  Constants are
// never trusted: fit_constants measures (lambda, C1, C2) by least squares
// over frame slots and sample points, and the residual operations compare
// candidate constant triples against the measured structure.  Includes the
// slot identities satisfied by the Sasakian lift of a Kaehler-Ricci soliton
// and the Ricci-form version of the soliton equation.

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "saslift/calculus.hpp"
#include "saslift/deform.hpp"
#include "saslift/lift.hpp"
#include "saslift/residual.hpp"

namespace saslift {

struct TwistedSolitonData {
  VectorEval X;
  double lambda = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
};

enum class SolitonClass { kSubcritical, kCritical, kSupercritical };

/// Classification by the twist coefficient; the critical band is C1 = 1/2
/// within 1e-9 (the fixed point of the C1 transport under all homotheties).
inline SolitonClass classify(double C1) {
  if (std::abs(C1 - 0.5) <= 1e-9) return SolitonClass::kCritical;
  return C1 < 0.5 ? SolitonClass::kSubcritical : SolitonClass::kSupercritical;
}

inline const char* to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::kSubcritical: return "subcritical";
    case SolitonClass::kCritical: return "critical";
    default: return "supercritical";
  }
}

/// The fundamental form Phi(X,Y) = g(X, phi Y) as a matrix evaluator.
inline MatrixEval fundamental_form_eval(const ContactStructure& cs) {
  return [g = cs.chart.metric, phi = cs.phi, d = cs.chart.dim](JetPoint q) {
    JetVec gv = g(q), pv = phi(q);
    JetVec out(d * d, q[0].constant_like(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Jet s = q[0].constant_like(0.0);
        for (int c = 0; c < d; ++c) s += gv[a * d + c] * pv[c * d + b];
        out[a * d + b] = s;
      }
    return out;
  };
}

/// Frame adapted to the structure: first vector xi, the rest completing it
/// g-orthonormally from the coordinate basis.
inline Mat adapted_frame(const ContactStructure& cs, const Vec& q) {
  detail::ContactValues v = detail::contact_values(cs, q);
  const int d = cs.chart.dim;
  Mat frame(d, d);
  frame.col(0) = v.xi / std::sqrt(v.xi.dot(v.g * v.xi));
  int col = 1;
  for (int a = 0; a < d && col < d; ++a) {
    Vec w = Vec::Unit(d, a);
    for (int j = 0; j < col; ++j) w -= frame.col(j).dot(v.g * w) * frame.col(j);
    double nrm = std::sqrt(std::abs(w.dot(v.g * w)));
    if (nrm < 1e-8) continue;  // direction already spanned
    frame.col(col++) = w / nrm;
  }
  if (col != d) throw chart_error("adapted_frame: could not complete the frame");
  return frame;
}

namespace detail {

/// Left side Ric + L_X g / 2 and the ingredients of the right side at q.
struct SolitonSlots {
  Mat lhs;       // Ric + L_X g / 2
  Mat g;         // metric
  Mat twist;     // alpha_X . eta (symmetrized)
  Mat eta_eta;   // eta (x) eta
  Vec eta, alpha_x;
};

inline SolitonSlots soliton_slots(const ContactStructure& cs, const VectorEval& X, const Vec& q) {
  SolitonSlots s;
  CurvatureSuite suite = curvature_suite(cs.chart, q);
  Mat lxg = lie_derivative_02(X, cs.chart.metric, q);
  s.lhs = suite.ricci + 0.5 * lxg;
  s.g = suite.g;
  s.eta = jet_values(cs.eta(seed_point(std::span<const double>(q.data(), q.size()), 0)));
  s.alpha_x = lie_derivative_01(X, cs.eta, q);
  s.twist = 0.5 * (s.alpha_x * s.eta.transpose() + s.eta * s.alpha_x.transpose());
  s.eta_eta = s.eta * s.eta.transpose();
  return s;
}

}  // namespace detail

/// Max-norm residual of the twisted soliton equation over the adapted frame
/// (xi slot included), for the given constants.
inline ResidualRecord twisted_residual(const ContactStructure& cs, const TwistedSolitonData& tsd,
                                       const Vec& q) {
  detail::SolitonSlots s = detail::soliton_slots(cs, tsd.X, q);
  Mat res = s.lhs - tsd.lambda * s.g - 2.0 * tsd.C1 * s.twist - tsd.C2 * s.eta_eta;
  Mat frame = adapted_frame(cs, q);
  Mat framed = frame.transpose() * res * frame;
  ResidualRecord r;
  r.add("twisted soliton equation", framed.cwiseAbs().maxCoeff());
  r.add("eta(X) = 0", std::abs(s.eta.dot(jet_values(
                          tsd.X(seed_point(std::span<const double>(q.data(), q.size()), 0))))));
  r.add("alpha_X(xi) = 0",
        std::abs(s.alpha_x.dot(jet_values(
            cs.xi(seed_point(std::span<const double>(q.data(), q.size()), 0))))));
  return r;
}

struct FitResult {
  double lambda = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double residual = 0.0;   // post-fit max residual over all slots
  bool twist_degenerate = false;  // alpha_X vanished; C1 fixed to 0 by minimal norm
};

/// Least-squares fit of (lambda, 2 C1, C2) from the soliton equation
/// assembled over adapted-frame slots at all sample points.  Throws when the
/// design matrix is rank deficient for reasons other than a vanishing twist
/// column.
inline FitResult fit_constants(const ContactStructure& cs, const VectorEval& X,
                               const std::vector<Vec>& points) {
  if (points.empty())
    throw std::runtime_error("fit_constants: rank-deficient design matrix, add sample points");
  const int d = cs.chart.dim;
  std::vector<double> rows_lhs;
  std::vector<std::array<double, 3>> rows;
  for (const Vec& q : points) {
    detail::SolitonSlots s = detail::soliton_slots(cs, X, q);
    double eta_x = std::abs(s.eta.dot(jet_values(
        X(seed_point(std::span<const double>(q.data(), q.size()), 0)))));
    if (eta_x > 1e-10)
      throw std::invalid_argument("fit_constants: eta(X) != 0 at a sample point (" +
                                  std::to_string(eta_x) + ")");
    Mat frame = adapted_frame(cs, q);
    Mat lhs_f = frame.transpose() * s.lhs * frame;
    Mat g_f = frame.transpose() * s.g * frame;
    Mat tw_f = frame.transpose() * s.twist * frame;
    Mat ee_f = frame.transpose() * s.eta_eta * frame;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        rows.push_back({g_f(i, j), tw_f(i, j), ee_f(i, j)});
        rows_lhs.push_back(lhs_f(i, j));
      }
  }
  const int m = static_cast<int>(rows.size());
  Mat A(m, 3);
  Vec b(m);
  for (int r = 0; r < m; ++r) {
    A(r, 0) = rows[r][0];
    A(r, 1) = rows[r][1];
    A(r, 2) = rows[r][2];
    b[r] = rows_lhs[r];
  }

  FitResult out;
  double twist_norm = A.col(1).norm();
  if (twist_norm < 1e-12) {
    // No twist information: minimal-norm rule pins C1 = 0.
    out.twist_degenerate = true;
    Mat A2(m, 2);
    A2.col(0) = A.col(0);
    A2.col(1) = A.col(2);
    Eigen::JacobiSVD<Mat> svd(A2, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    if (svd.rank() < 2)
      throw std::runtime_error("fit_constants: rank-deficient design matrix, add sample points");
    Vec u = svd.solve(b);
    out.lambda = u[0];
    out.C1 = 0.0;
    out.C2 = u[1];
  } else {
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    if (svd.rank() < 3)
      throw std::runtime_error("fit_constants: rank-deficient design matrix, add sample points");
    Vec u = svd.solve(b);
    out.lambda = u[0];
    out.C1 = 0.5 * u[1];
    out.C2 = u[2];
  }
  Vec fitted(3);
  fitted << out.lambda, 2.0 * out.C1, out.C2;
  out.residual = (A * fitted - b).cwiseAbs().maxCoeff();
  return out;
}

/// The three slot identities of the lift of a Kaehler-Ricci soliton, with
/// S = Ric + L_{X^L} g^L / 2:
///   S(Y^L, Z^L) = (lambda - 2) g^L(Y^L, Z^L),
///   S(xi, Y^L)  = Phi(X^L, Y^L),
///   S(xi, xi)   = 2n.
inline ResidualRecord lift_soliton_residuals(const LiftStructure& ls, const SolitonDatum& sd,
                                             const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  KrSolitonResidual base = kr_soliton_residual(*ls.base, sd, x);
  if (base.metric_eq > 1e-8 || base.lxj > 1e-8)
    throw chart_error("lift_soliton_residuals: base is not a Kaehler-Ricci soliton (residual " +
                      std::to_string(std::max(base.metric_eq, base.lxj)) + ")");

  VectorEval Xl = lift_field(ls.base, sd.X);
  detail::SolitonSlots s = detail::soliton_slots(ls.contact, Xl, q);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);

  CurvatureSuite base_suite = curvature_suite(ls.base->base, x);
  PointFrame bframe = orthonormal_frame(base_suite.g, x);
  Vec tau = jet_values(ls.base->tau(seed_point(std::span<const double>(x.data(), db), 0)));
  auto lift_of = [&](const Vec& v) {
    Vec out(d);
    out[0] = -tau.dot(v);
    out.tail(db) = v;
    return out;
  };
  Vec xl_val = jet_values(Xl(seed_point(std::span<const double>(q.data(), d), 0)));

  double slot_pairs = 0.0, slot_mixed = 0.0;
  for (int i = 0; i < db; ++i) {
    Vec El = lift_of(bframe.basis.col(i));
    for (int j = 0; j < db; ++j) {
      Vec Fl = lift_of(bframe.basis.col(j));
      double lhs = El.dot(s.lhs * Fl);
      double rhs = (sd.lambda - 2.0) * El.dot(cv.g * Fl);
      slot_pairs = std::max(slot_pairs, std::abs(lhs - rhs));
    }
    double lhs_m = cv.xi.dot(s.lhs * El);
    double rhs_m = xl_val.dot(cv.Phi * El);
    slot_mixed = std::max(slot_mixed, std::abs(lhs_m - rhs_m));
  }
  double slot_xixi = std::abs(cv.xi.dot(s.lhs * cv.xi) - 2.0 * ls.n());

  ResidualRecord r;
  r.add("lifted-pair slot = (lambda-2) g", slot_pairs);
  r.add("mixed slot = Phi(X^L, .)", slot_mixed);
  r.add("xi-xi slot = 2n", slot_xixi);
  return r;
}

/// Homothety of a structure carrying a twisted-soliton datum: the field is
/// rescaled to X' = X / alpha and the constants transported by the
/// closed-form map, so the image datum again satisfies the soliton equation.
inline std::pair<DeformedStructure, TwistedSolitonData> apply_homothety(
    const ContactStructure& cs, const TwistedSolitonData& tsd, const HomothetyParams& hp,
    bool validate = true) {
  DeformedStructure ds = apply_homothety(cs, hp, validate);
  SolitonConstants mapped =
      soliton_constants_map(tsd.lambda, tsd.C1, tsd.C2, cs.n(), hp);
  TwistedSolitonData out{scale_field(tsd.X, 1.0 / hp.alpha), mapped.lambda, mapped.C1, mapped.C2};
  return {std::move(ds), std::move(out)};
}

/// Ricci-form version on the lift: rho' + L_{X^L} Phi / 2 = (lambda - 2) Phi.
inline ResidualRecord ricci_form_soliton_residual(const LiftStructure& ls, const SolitonDatum& sd,
                                                  const Vec& q) {
  CurvatureSuite suite = curvature_suite(ls.contact.chart, q);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  VectorEval Xl = lift_field(ls.base, sd.X);
  Mat rho_lift = suite.ricci * cv.phi;
  Mat lx_phi = lie_derivative_02(Xl, fundamental_form_eval(ls.contact), q);
  Mat res = rho_lift + 0.5 * lx_phi - (sd.lambda - 2.0) * cv.Phi;
  ResidualRecord r;
  r.add("Ricci-form soliton identity", res.cwiseAbs().maxCoeff());
  return r;
}

}  // namespace saslift
