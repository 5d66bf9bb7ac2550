#pragma once
// Lifts of base symmetries to the Sasakian lift:
//
//   holomorphic V (L_V J = 0):  (L_{V^L} phi) X^L = 2 g^L(V^L, X^L) xi,
//                               (L_{V^L} phi) xi = 0;
//   Killing V (L_V g = 0):      (L_{V^L} g^L)(X^L, Y^L) = 0,
//                               (L_{V^L} g^L)(xi, X^L) = 2 Phi(V^L, X^L);
//   symplectic V (L_V w = 0):   L_{V^L} Phi = 0 and d(L_{V^L} eta) = 0;
//
// and for a full automorphism (Killing + holomorphic), the corrected field
// U_V = V^L + f xi with f = -2 H(pullback), H a Hamiltonian of V
// (w(V, .) = dH), is an infinitesimal automorphism of the whole structure.
// The opposite sign f = +2 H is kept available as a negative control; it
// must fail by a margin.

#include <cmath>
#include <string>

#include "saslift/calculus.hpp"
#include "saslift/kahler.hpp"
#include "saslift/lift.hpp"
#include "saslift/quadrature.hpp"
#include "saslift/residual.hpp"
#include "saslift/soliton.hpp"

namespace saslift {

/// Measured symmetry residuals of a base field at sample points.
struct SymmetryMeasurement {
  double killing = 0.0;      // max |L_V g|
  double holomorphic = 0.0;  // max |L_V J|
  double symplectic = 0.0;   // max |L_V omega|
  bool is_killing(double tol = 1e-9) const { return killing < tol; }
  bool is_holomorphic(double tol = 1e-9) const { return holomorphic < tol; }
  bool is_symplectic(double tol = 1e-9) const { return symplectic < tol; }
};

inline SymmetryMeasurement measure_symmetry(const KahlerStructure& ks, const VectorEval& V,
                                            const std::vector<Vec>& points) {
  SymmetryMeasurement m;
  MatrixEval Jf = constant_matrix_field(ks.J);
  for (const Vec& p : points) {
    m.killing = std::max(m.killing, lie_derivative_02(V, ks.base.metric, p).cwiseAbs().maxCoeff());
    m.holomorphic = std::max(m.holomorphic, lie_derivative_11(V, Jf, p).cwiseAbs().maxCoeff());
    m.symplectic = std::max(m.symplectic, lie_derivative_02(V, ks.omega, p).cwiseAbs().maxCoeff());
  }
  return m;
}

inline ScalarEval hamiltonian_field(const KahlerStructure& ks, const VectorEval& V);

/// A base field with its measured symmetry flags and, when the field is
/// symplectic, a Hamiltonian with w(V, .) = dH.
struct SymmetryField {
  VectorEval V;
  SymmetryMeasurement flags;
  ScalarEval hamiltonian;  // empty unless symplectic
};

inline SymmetryField make_symmetry_field(const KahlerStructure& ks, VectorEval V,
                                         const std::vector<Vec>& points) {
  SymmetryField sf;
  sf.flags = measure_symmetry(ks, V, points);
  sf.V = std::move(V);
  if (sf.flags.is_symplectic(1e-8)) sf.hamiltonian = hamiltonian_field(ks, sf.V);
  return sf;
}

namespace detail {

inline void require_residual(double value, double tol, const std::string& what) {
  if (!(value < tol))
    throw chart_error("symmetry precondition failed: " + what + " residual " +
                      std::to_string(value));
}

}  // namespace detail

/// Lift of an infinitesimal automorphism of the complex structure.
inline ResidualRecord automorphism_lift_residual(const LiftStructure& ls, const VectorEval& V,
                                                 const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  detail::require_residual(
      lie_derivative_11(V, constant_matrix_field(ls.base->J), x).cwiseAbs().maxCoeff(), 1e-9,
      "L_V J");

  VectorEval Vl = lift_field(ls.base, V);
  Mat lphi = lie_derivative_11(Vl, ls.contact.phi, q);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  Vec vl = jet_values(Vl(seed_point(std::span<const double>(q.data(), d), 0)));
  Vec tau = jet_values(ls.base->tau(seed_point(std::span<const double>(x.data(), db), 0)));

  double worst_lifted = 0.0;
  for (int a = 0; a < db; ++a) {
    Vec Xl(d);
    Xl[0] = -tau[a];
    Xl.tail(db) = Vec::Unit(db, a);
    Vec lhs = lphi * Xl;
    Vec rhs = 2.0 * vl.dot(cv.g * Xl) * cv.xi;
    worst_lifted = std::max(worst_lifted, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  ResidualRecord r;
  r.add("(L_{V^L} phi) X^L = 2 g(V^L,X^L) xi", worst_lifted);
  r.add("(L_{V^L} phi) xi = 0", (lphi * cv.xi).cwiseAbs().maxCoeff());
  return r;
}

/// Lift of a Killing field.
inline ResidualRecord killing_lift_residual(const LiftStructure& ls, const VectorEval& V,
                                            const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  detail::require_residual(lie_derivative_02(V, ls.base->base.metric, x).cwiseAbs().maxCoeff(),
                           1e-9, "L_V g");

  VectorEval Vl = lift_field(ls.base, V);
  Mat lg = lie_derivative_02(Vl, ls.contact.chart.metric, q);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  Vec vl = jet_values(Vl(seed_point(std::span<const double>(q.data(), d), 0)));
  Vec tau = jet_values(ls.base->tau(seed_point(std::span<const double>(x.data(), db), 0)));

  double worst_pairs = 0.0, worst_mixed = 0.0;
  for (int a = 0; a < db; ++a) {
    Vec Xl(d);
    Xl[0] = -tau[a];
    Xl.tail(db) = Vec::Unit(db, a);
    for (int b = 0; b < db; ++b) {
      Vec Yl(d);
      Yl[0] = -tau[b];
      Yl.tail(db) = Vec::Unit(db, b);
      worst_pairs = std::max(worst_pairs, std::abs(Xl.dot(lg * Yl)));
    }
    double lhs = cv.xi.dot(lg * Xl);
    double rhs = 2.0 * vl.dot(cv.Phi * Xl);
    worst_mixed = std::max(worst_mixed, std::abs(lhs - rhs));
  }
  ResidualRecord r;
  r.add("(L_{V^L} g)(X^L, Y^L) = 0", worst_pairs);
  r.add("(L_{V^L} g)(xi, X^L) = 2 Phi(V^L, X^L)", worst_mixed);
  return r;
}

/// Lift of an infinitesimal automorphism of the Kaehler form.
inline ResidualRecord form_automorphism_residual(const LiftStructure& ls, const VectorEval& V,
                                                 const Vec& q) {
  const int db = ls.dim() - 1;
  const Vec x = q.tail(db);
  detail::require_residual(lie_derivative_02(V, ls.base->omega, x).cwiseAbs().maxCoeff(), 1e-9,
                           "L_V omega");

  VectorEval Vl = lift_field(ls.base, V);
  Mat lphi_form = lie_derivative_02(Vl, fundamental_form_eval(ls.contact), q);
  ResidualRecord r;
  r.add("L_{V^L} Phi = 0", lphi_form.cwiseAbs().maxCoeff());

  JetVec leta = lie_derivative_01_jets(Vl, ls.contact.eta, q);
  const int d = ls.dim();
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      worst = std::max(worst, 0.5 * std::abs(leta[b].partial_derivative(a).value() -
                                             leta[a].partial_derivative(b).value()));
  r.add("d(L_{V^L} eta) = 0", worst);
  return r;
}

/// Combined statement for a full Kaehler automorphism:
///   L_{V^L} phi = 2 alpha (x) xi,  L_{V^L} g^L = 4 alpha^phi . eta,
///   L_{V^L} Phi = 0,  d alpha^phi = 0,
/// with alpha(.) = g^L(V^L, .) and alpha^phi(.) = alpha(phi .).
inline ResidualRecord combined_theorem_residual(const LiftStructure& ls, const VectorEval& V,
                                                const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  detail::require_residual(lie_derivative_02(V, ls.base->base.metric, x).cwiseAbs().maxCoeff(),
                           1e-9, "L_V g");
  detail::require_residual(
      lie_derivative_11(V, constant_matrix_field(ls.base->J), x).cwiseAbs().maxCoeff(), 1e-9,
      "L_V J");

  VectorEval Vl = lift_field(ls.base, V);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  Vec vl = jet_values(Vl(seed_point(std::span<const double>(q.data(), d), 0)));
  Vec alpha = cv.g * vl;
  Vec alpha_phi = cv.phi.transpose() * alpha;  // alpha^phi_b = alpha_c phi^c_b

  ResidualRecord r;
  Mat lphi = lie_derivative_11(Vl, ls.contact.phi, q);
  Mat expected_phi = 2.0 * cv.xi * alpha.transpose();
  r.add("L_{V^L} phi = 2 alpha (x) xi", (lphi - expected_phi).cwiseAbs().maxCoeff());

  Mat lg = lie_derivative_02(Vl, ls.contact.chart.metric, q);
  Mat expected_g = 2.0 * (alpha_phi * cv.eta.transpose() + cv.eta * alpha_phi.transpose());
  r.add("L_{V^L} g = 4 alpha^phi . eta", (lg - expected_g).cwiseAbs().maxCoeff());

  Mat lPhi = lie_derivative_02(Vl, fundamental_form_eval(ls.contact), q);
  r.add("L_{V^L} Phi = 0", lPhi.cwiseAbs().maxCoeff());

  OneFormEval alpha_phi_field = [base = ls.base, g = ls.contact.chart.metric,
                                 phi = ls.contact.phi, Vl, d](JetPoint qq) {
    JetVec gv = g(qq), pv = phi(qq), vv = Vl(qq);
    JetVec a(d, qq[0].constant_like(0.0));
    for (int bb = 0; bb < d; ++bb)
      for (int cc = 0; cc < d; ++cc) a[bb] += gv[cc * d + bb] * vv[cc];
    JetVec out(d, qq[0].constant_like(0.0));
    for (int bb = 0; bb < d; ++bb)
      for (int cc = 0; cc < d; ++cc) out[bb] += a[cc] * pv[cc * d + bb];
    return out;
  };
  r.add("d alpha^phi = 0", exterior_derivative_half(alpha_phi_field, q).cwiseAbs().maxCoeff());
  return r;
}

/// Local Hamiltonian of a symplectic field by radial homotopy from the chart
/// origin: H(p) = int_0^1 gamma_b(t p) p^b dt with gamma = w(V, .), so that
/// dH = gamma and H(0) = 0.
inline ScalarEval hamiltonian_field(const KahlerStructure& ks, const VectorEval& V) {
  const int d = ks.base.dim;
  return [omega = ks.omega, V, d](JetPoint q) {
    const QuadratureRule& quad = radial_quadrature();
    Jet H = q[0].constant_like(0.0);
    JetVec tx(static_cast<size_t>(d), q[0]);
    for (size_t k = 0; k < quad.node.size(); ++k) {
      const double t = quad.node[k];
      for (int c = 0; c < d; ++c) tx[c] = q[c] * t;
      JetVec w = omega(tx);
      JetVec vv = V(tx);
      for (int b = 0; b < d; ++b) {
        Jet gamma_b = q[0].constant_like(0.0);
        for (int a = 0; a < d; ++a) gamma_b += vv[a] * w[a * d + b];
        H += gamma_b * q[b] * quad.weight[k];
      }
    }
    return H;
  };
}

inline double hamiltonian_of(const KahlerStructure& ks, const VectorEval& V, const Vec& p) {
  detail::require_residual(lie_derivative_02(V, ks.omega, p).cwiseAbs().maxCoeff(), 1e-8,
                           "L_V omega (Hamiltonian existence)");
  ScalarEval H = hamiltonian_field(ks, V);
  return H(seed_point(std::span<const double>(p.data(), p.size()), 0)).value();
}

/// Corrected automorphism U_V = V^L + f xi with f = f_coefficient * H(pullback).
/// The structure's sign convention demands f_coefficient = -2; +2 is the
/// negative control.
inline ResidualRecord corrected_automorphism_residual(const LiftStructure& ls, const VectorEval& V,
                                                      const Vec& q, double f_coefficient = -2.0) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  detail::require_residual(lie_derivative_02(V, ls.base->base.metric, x).cwiseAbs().maxCoeff(),
                           1e-9, "L_V g");
  detail::require_residual(
      lie_derivative_11(V, constant_matrix_field(ls.base->J), x).cwiseAbs().maxCoeff(), 1e-9,
      "L_V J");

  ScalarEval H = hamiltonian_field(*ls.base, V);
  VectorEval Vl = lift_field(ls.base, V);
  VectorEval U = [Vl, H, f_coefficient](JetPoint qq) {
    JetVec u = Vl(qq);
    u[0] += H(detail::spatial(qq)) * f_coefficient;
    return u;
  };

  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  Vec tau = jet_values(ls.base->tau(seed_point(std::span<const double>(x.data(), db), 0)));

  ResidualRecord r;
  Mat lphi = lie_derivative_11(U, ls.contact.phi, q);
  r.add("L_{U} phi = 0", lphi.cwiseAbs().maxCoeff());

  Mat lg = lie_derivative_02(U, ls.contact.chart.metric, q);
  double worst_pairs = 0.0, worst_mixed = 0.0;
  for (int a = 0; a < db; ++a) {
    Vec Xl(d);
    Xl[0] = -tau[a];
    Xl.tail(db) = Vec::Unit(db, a);
    for (int b = 0; b < db; ++b) {
      Vec Yl(d);
      Yl[0] = -tau[b];
      Yl.tail(db) = Vec::Unit(db, b);
      worst_pairs = std::max(worst_pairs, std::abs(Xl.dot(lg * Yl)));
    }
    worst_mixed = std::max(worst_mixed, std::abs(cv.xi.dot(lg * Xl)));
  }
  r.add("(L_{U} g)(Y^L, Z^L) = 0", worst_pairs);
  r.add("(L_{U} g)(xi, Y^L) = 0", worst_mixed);

  // f is a pullback from the base, so df(xi) = 0.
  JetVec q1 = seed_point(std::span<const double>(q.data(), d), 1);
  Jet f = H(detail::spatial(JetPoint(q1))) * f_coefficient;
  r.add("df(xi) = 0", std::abs(f.partial_derivative(0).value()));
  return r;
}

}  // namespace saslift
