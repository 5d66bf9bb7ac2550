#pragma once
// The Sasakian lift of a Kaehler base: on the chart R x N with coordinates
// (t, x^1..x^2n) set
//
//   xi  = d_t,            eta = dt + tau,
//   g^L = eta (x) eta + pullback(g),
//   phi xi = 0,           phi X^L = (J X)^L,
//
// where X^L = X - tau(X) xi is the horizontal lift of a base field.  In
// coordinates phi^b_a = J^b_a, phi^0_a = -J^c_a tau_c, phi(d_t) = 0; this
// realization is validated against the defining relations at build time.
// The verification operations compare lift-side quantities (computed from
// the lift metric's own Christoffels) with base-side predictions, each by an
// independent code path.

#include <memory>
#include <string>
#include <vector>

#include "saslift/calculus.hpp"
#include "saslift/chart.hpp"
#include "saslift/curvature.hpp"
#include "saslift/kahler.hpp"
#include "saslift/residual.hpp"

namespace saslift {

/// Almost contact metric structure (phi, xi, eta, g) on an odd-dimensional
/// chart; the metric lives on the chart itself.
struct ContactStructure {
  ChartManifold chart;
  MatrixEval phi;
  VectorEval xi;
  OneFormEval eta;
  int n() const { return (chart.dim - 1) / 2; }
};

struct LiftStructure {
  std::shared_ptr<const KahlerStructure> base;
  ContactStructure contact;
  int n() const { return base->n(); }
  int dim() const { return contact.chart.dim; }
};

namespace detail {

inline JetPoint spatial(JetPoint q) { return q.subspan(1); }

}  // namespace detail

/// Horizontal lift of a base vector field as a field on the lift chart:
/// components (-tau(X), X^1..X^2n), so eta(X^L) = 0.
inline VectorEval lift_field(const std::shared_ptr<const KahlerStructure>& base,
                             const VectorEval& X) {
  return [base, X](JetPoint q) {
    JetPoint x = detail::spatial(q);
    JetVec xv = X(x);
    JetVec tau = base->tau(x);
    Jet t0 = q[0].constant_like(0.0);
    for (size_t b = 0; b < xv.size(); ++b) t0 -= tau[b] * xv[b];
    JetVec out;
    out.reserve(xv.size() + 1);
    out.push_back(t0);
    for (auto& c : xv) out.push_back(std::move(c));
    return out;
  };
}

/// Value form of the lift at a lift point.
inline Vec lift_vector(const LiftStructure& ls, const VectorEval& X, const Vec& q) {
  VectorEval f = lift_field(ls.base, X);
  JetVec seeds = seed_point(std::span<const double>(q.data(), q.size()), 0);
  return jet_values(f(seeds));
}

inline LiftStructure build_lift_unchecked(KahlerStructure ks) {
  auto base = std::make_shared<const KahlerStructure>(std::move(ks));
  const int db = base->base.dim;
  const int d = db + 1;

  LiftStructure ls;
  ls.base = base;
  ContactStructure& cs = ls.contact;
  cs.chart.dim = d;

  Box box;
  box.lo = Vec(d);
  box.hi = Vec(d);
  box.lo[0] = -1.0;
  box.hi[0] = 1.0;
  box.lo.tail(db) = base->base.sample_box.lo;
  box.hi.tail(db) = base->base.sample_box.hi;
  cs.chart.sample_box = box;

  cs.eta = [base, db](JetPoint q) {
    JetVec tau = base->tau(detail::spatial(q));
    JetVec out;
    out.reserve(db + 1);
    out.push_back(q[0].constant_like(1.0));
    for (auto& t : tau) out.push_back(std::move(t));
    return out;
  };

  cs.xi = [db](JetPoint q) {
    JetVec out(db + 1, q[0].constant_like(0.0));
    out[0] = q[0].constant_like(1.0);
    return out;
  };

  cs.chart.metric = [base, db, d](JetPoint q) {
    JetPoint x = detail::spatial(q);
    JetVec gb = base->base.metric(x);
    JetVec tau = base->tau(x);
    JetVec g(d * d, q[0].constant_like(0.0));
    g[0] = q[0].constant_like(1.0);
    for (int a = 0; a < db; ++a) {
      g[0 * d + (a + 1)] = tau[a];
      g[(a + 1) * d + 0] = tau[a];
      for (int b = 0; b < db; ++b) g[(a + 1) * d + (b + 1)] = gb[a * db + b] + tau[a] * tau[b];
    }
    return g;
  };

  cs.phi = [base, db, d](JetPoint q) {
    JetPoint x = detail::spatial(q);
    JetVec tau = base->tau(x);
    const Mat& J = base->J;
    JetVec phi(d * d, q[0].constant_like(0.0));
    for (int a = 0; a < db; ++a) {
      Jet top = q[0].constant_like(0.0);
      for (int c = 0; c < db; ++c) {
        if (J(c, a) != 0.0) top -= tau[c] * J(c, a);
        phi[(c + 1) * d + (a + 1)] = q[0].constant_like(J(c, a));
      }
      phi[0 * d + (a + 1)] = top;
    }
    return phi;
  };

  return ls;
}

namespace detail {

/// Pointwise values of the contact tensors at a lift point.
struct ContactValues {
  Mat g, ginv, phi, Phi;  // Phi(a,b) = g(e_a, phi e_b)
  Vec xi, eta;
};

inline ContactValues contact_values(const ContactStructure& cs, const Vec& q) {
  ContactValues v;
  int d = cs.chart.dim;
  JetVec seeds = seed_point(std::span<const double>(q.data(), q.size()), 0);
  v.g = jet_values(cs.chart.metric(seeds), d, d);
  v.phi = jet_values(cs.phi(seeds), d, d);
  v.xi = jet_values(cs.xi(seeds));
  v.eta = jet_values(cs.eta(seeds));
  v.ginv = metric_data(v.g).ginv;
  v.Phi = v.g * v.phi;
  return v;
}

}  // namespace detail

/// Almost-contact metric invariants at one point: phi^2 = -Id + eta (x) xi,
/// eta(xi) = 1, metric compatibility, antisymmetry of the fundamental form.
inline ResidualRecord almost_contact_invariants(const ContactStructure& cs, const Vec& q) {
  detail::ContactValues v = detail::contact_values(cs, q);
  int d = cs.chart.dim;
  ResidualRecord r;
  Mat phi2 = v.phi * v.phi + Mat::Identity(d, d) - v.xi * v.eta.transpose();
  r.add("phi^2 = -Id + eta(x)xi", phi2.cwiseAbs().maxCoeff());
  r.add("eta(xi) = 1", std::abs(v.eta.dot(v.xi) - 1.0));
  Mat compat = v.phi.transpose() * v.g * v.phi - v.g + v.eta * v.eta.transpose();
  r.add("g(phi.,phi.) = g - eta(x)eta", compat.cwiseAbs().maxCoeff());
  r.add("Phi antisymmetric", (v.Phi + v.Phi.transpose()).cwiseAbs().maxCoeff());
  return r;
}

/// Almost-contact invariants plus the contact-metric condition d eta = Phi.
inline ResidualRecord contact_invariants(const ContactStructure& cs, const Vec& q) {
  detail::ContactValues v = detail::contact_values(cs, q);
  ResidualRecord r = almost_contact_invariants(cs, q);
  Mat deta = exterior_derivative_half(cs.eta, q);
  r.add("d eta = Phi", (deta - v.Phi).cwiseAbs().maxCoeff());
  return r;
}

/// Builds the lift and checks the contact invariants at construction-time
/// sample points; throws chart_error naming the failing identity.
inline LiftStructure build_lift(KahlerStructure ks, int points = 6,
                                std::uint64_t seed = 0xBEEFull) {
  LiftStructure ls = build_lift_unchecked(std::move(ks));
  PointSampler s(ls.contact.chart.sample_box, seed);
  for (int it = 0; it < points; ++it) {
    Vec q = s.next_point();
    ResidualRecord r = contact_invariants(ls.contact, q);
    for (const auto& e : r.entries)
      if (std::abs(e.second) > 1e-9)
        throw chart_error("lift build: invariant '" + e.first + "' fails at a sample point, residual " +
                          std::to_string(e.second));
  }
  return ls;
}

/// Sasakian identities at one point, everything computed from the lift
/// metric's own Levi-Civita connection:
///   (nabla_X phi)Y = g(X,Y) xi - eta(Y) X,   nabla_X xi = -phi X,
///   L_xi g = 0,   N_phi + 2 d eta (x) xi = 0,
///   R(X,Y) xi = eta(Y) X - eta(X) Y,   Ric(X, xi) = 2n eta(X).
inline ResidualRecord validate_sasakian_point(const ContactStructure& cs, const Vec& q) {
  const int d = cs.chart.dim;
  const int n = cs.n();
  detail::ContactValues v = detail::contact_values(cs, q);
  CurvatureSuite suite = curvature_suite(cs.chart, q);
  ResidualRecord r;

  Tens3 nphi = covariant_derivative_11(suite.gamma, cs.phi, q);
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double rhs = v.g(a, c) * v.xi[b] - v.eta[c] * (a == b ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(nphi(a, b, c) - rhs));
      }
  r.add("nabla(phi) identity", worst);

  Mat nxi = covariant_derivative_10(suite.gamma, cs.xi, q);
  worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) worst = std::max(worst, std::abs(nxi(a, b) + v.phi(b, a)));
  r.add("nabla(xi) = -phi", worst);

  r.add("Killing xi", lie_derivative_02(cs.xi, cs.chart.metric, q).cwiseAbs().maxCoeff());

  Mat deta = exterior_derivative_half(cs.eta, q);
  worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vec e_a = Vec::Unit(d, a), e_b = Vec::Unit(d, b);
      Vec nij = nijenhuis(cs.phi, e_a, e_b, q);
      Vec n1 = nij + 2.0 * deta(a, b) * v.xi;
      worst = std::max(worst, n1.cwiseAbs().maxCoeff());
    }
  r.add("normality N1 = 0", worst);

  worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int l = 0; l < d; ++l) {
        double lhs = 0.0;
        for (int k = 0; k < d; ++k) lhs += suite.riemann(l, a, b, k) * v.xi[k];
        double rhs = v.eta[b] * (l == a ? 1.0 : 0.0) - v.eta[a] * (l == b ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  r.add("R(X,Y)xi identity", worst);

  Vec ric_xi = suite.ricci * v.xi;
  worst = 0.0;
  for (int a = 0; a < d; ++a)
    worst = std::max(worst, std::abs(ric_xi[a] - 2.0 * n * v.eta[a]));
  r.add("Ric(X,xi) = 2n eta(X)", worst);

  return r;
}

/// Max residuals of validate_sasakian_point over a sample set.
inline ResidualRecord validate_sasakian(const ContactStructure& cs,
                                        const std::vector<Vec>& points) {
  ResidualRecord out;
  for (const Vec& q : points) out.merge_max(validate_sasakian_point(cs, q));
  return out;
}

/// Structure equations relating lift and base connections, and the
/// commutator law for lifts:
///   nabla_{X^L} xi   = -phi X^L,
///   nabla_{X^L} Y^L  = (nabla_X Y)^L - Phi(X^L, Y^L) xi,
///   [X^L, Y^L]       = [X, Y]^L - 2 Phi(X^L, Y^L) xi.
/// Left sides use the lift Christoffels, right sides base Christoffels plus
/// lifting.
inline ResidualRecord structure_eq_residuals(const LiftStructure& ls, const VectorEval& X,
                                             const VectorEval& Y, const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);
  const ContactStructure& cs = ls.contact;

  VectorEval Xl = lift_field(ls.base, X);
  VectorEval Yl = lift_field(ls.base, Y);

  Tens3 gamma_lift = christoffel(cs.chart, q);
  Jets1 jyl = first_jets(Yl, q);
  Vec xlv = jet_values(Xl(seed_point(std::span<const double>(q.data(), d), 0)));

  // nabla_{X^L} Y^L from the lift side.
  Vec lhs2 = Vec::Zero(d);
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) {
      lhs2[b] += xlv[a] * jyl.der(a, b);
      for (int c = 0; c < d; ++c) lhs2[b] += xlv[a] * gamma_lift(b, a, c) * jyl.val[c];
    }

  // Base side: nabla_X Y, lifted, minus the fundamental-form correction.
  Tens3 gamma_base = christoffel(ls.base->base, x);
  Jets1 jy = first_jets(Y, x);
  Vec xv = jet_values(X(seed_point(std::span<const double>(x.data(), db), 0)));
  Vec yv = jy.val;
  Vec nxy = Vec::Zero(db);
  for (int b = 0; b < db; ++b)
    for (int a = 0; a < db; ++a) {
      nxy[b] += xv[a] * jy.der(a, b);
      for (int c = 0; c < db; ++c) nxy[b] += xv[a] * gamma_base(b, a, c) * yv[c];
    }
  JetVec x0 = seed_point(std::span<const double>(x.data(), db), 0);
  Mat omega = jet_values(ls.base->omega(x0), db, db);
  Vec tau = jet_values(ls.base->tau(x0));
  double phi_xy = xv.dot(omega * yv);  // Phi(X^L, Y^L) = omega(X, Y)
  Vec rhs2(d);
  rhs2[0] = -tau.dot(nxy) - phi_xy;
  rhs2.tail(db) = nxy;

  ResidualRecord r;

  // First structure equation.
  Vec lhs1 = Vec::Zero(d);
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) lhs1[b] += xlv[a] * gamma_lift(b, a, 0);
  Vec jx = ls.base->J * xv;
  Vec rhs1(d);
  rhs1[0] = tau.dot(jx);
  rhs1.tail(db) = -jx;
  r.add("nabla_{X^L} xi = -phi X^L", (lhs1 - rhs1).cwiseAbs().maxCoeff());

  r.add("nabla_{X^L} Y^L structure equation", (lhs2 - rhs2).cwiseAbs().maxCoeff());

  Vec br_lift = lie_bracket(Xl, Yl, q);
  Vec br_base = lie_bracket(X, Y, x);
  Vec br_lifted(d);
  br_lifted[0] = -tau.dot(br_base);
  br_lifted.tail(db) = br_base;
  Vec xi = Vec::Unit(d, 0);
  Vec comm = br_lift - br_lifted + 2.0 * phi_xy * xi;
  r.add("commutator of lifts", comm.cwiseAbs().maxCoeff());
  return r;
}

/// Curvature relation between lift and base:
///   R(X^L,Y^L)Z^L = (R_{XY}Z)^L + Phi(Y^L,Z^L) phi X^L - Phi(X^L,Z^L) phi Y^L
///                   - 2 Phi(X^L,Y^L) phi Z^L.
inline ResidualRecord curvature_relation_residual(const LiftStructure& ls, const Vec& Xv,
                                                  const Vec& Yv, const Vec& Zv, const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);

  CurvatureSuite lift_suite = curvature_suite(ls.contact.chart, q);
  CurvatureSuite base_suite = curvature_suite(ls.base->base, x);
  JetVec x0 = seed_point(std::span<const double>(x.data(), db), 0);
  Mat omega = jet_values(ls.base->omega(x0), db, db);
  Vec tau = jet_values(ls.base->tau(x0));
  const Mat& J = ls.base->J;

  auto lift_of = [&](const Vec& v) {
    Vec out(d);
    out[0] = -tau.dot(v);
    out.tail(db) = v;
    return out;
  };

  Vec Xl = lift_of(Xv), Yl = lift_of(Yv), Zl = lift_of(Zv);
  Vec lhs = Vec::Zero(d);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          lhs[l] += lift_suite.riemann(l, i, j, k) * Xl[i] * Yl[j] * Zl[k];

  Vec rxyz = Vec::Zero(db);
  for (int l = 0; l < db; ++l)
    for (int i = 0; i < db; ++i)
      for (int j = 0; j < db; ++j)
        for (int k = 0; k < db; ++k)
          rxyz[l] += base_suite.riemann(l, i, j, k) * Xv[i] * Yv[j] * Zv[k];

  double p_yz = Yv.dot(omega * Zv);
  double p_xz = Xv.dot(omega * Zv);
  double p_xy = Xv.dot(omega * Yv);
  Vec rhs = lift_of(rxyz) + p_yz * lift_of(J * Xv) - p_xz * lift_of(J * Yv) -
            2.0 * p_xy * lift_of(J * Zv);

  ResidualRecord r;
  r.add("curvature relation", (lhs - rhs).cwiseAbs().maxCoeff());
  return r;
}

/// Ricci relation Ric_lift(X^L,Y^L) = Ric_base(X,Y) - 2 g(X,Y) over a lifted
/// orthonormal base frame, and the scalar law s_lift = s_base - 2n.
inline ResidualRecord ricci_relation_residual(const LiftStructure& ls, const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);

  CurvatureSuite lift_suite = curvature_suite(ls.contact.chart, q);
  CurvatureSuite base_suite = curvature_suite(ls.base->base, x);
  Vec tau = jet_values(ls.base->tau(seed_point(std::span<const double>(x.data(), db), 0)));
  PointFrame frame = orthonormal_frame(base_suite.g, x);

  auto lift_of = [&](const Vec& v) {
    Vec out(d);
    out[0] = -tau.dot(v);
    out.tail(db) = v;
    return out;
  };

  double worst = 0.0;
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j) {
      Vec Ei = frame.basis.col(i), Ej = frame.basis.col(j);
      Vec El = lift_of(Ei), Fl = lift_of(Ej);
      double lhs = El.dot(lift_suite.ricci * Fl);
      double rhs = Ei.dot(base_suite.ricci * Ej) - 2.0 * Ei.dot(base_suite.g * Ej);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  ResidualRecord r;
  r.add("Ricci relation on lifted pairs", worst);
  r.add("scalar curvature law s' = s - 2n",
        std::abs(lift_suite.scalar - (base_suite.scalar - 2.0 * ls.n())));
  return r;
}

/// Ricci-form relation rho_lift = pullback(rho) - 2 pullback(omega), its
/// xi-slot vanishing, and closedness of rho_lift.
inline ResidualRecord ricci_form_relation(const LiftStructure& ls, const Vec& q) {
  const int d = ls.dim();
  const int db = d - 1;
  const Vec x = q.tail(db);

  CurvatureSuite lift_suite = curvature_suite(ls.contact.chart, q);
  JetVec q0 = seed_point(std::span<const double>(q.data(), d), 0);
  Mat phi = jet_values(ls.contact.phi(q0), d, d);
  Mat rho_lift = lift_suite.ricci * phi;

  Mat rho_base = ricci_form(*ls.base, x);
  JetVec x0 = seed_point(std::span<const double>(x.data(), db), 0);
  Mat omega = jet_values(ls.base->omega(x0), db, db);
  Vec tau = jet_values(ls.base->tau(x0));

  auto lift_of = [&](const Vec& v) {
    Vec out(d);
    out[0] = -tau.dot(v);
    out.tail(db) = v;
    return out;
  };

  double worst = 0.0;
  for (int a = 0; a < db; ++a)
    for (int b = 0; b < db; ++b) {
      Vec Al = lift_of(Vec::Unit(db, a)), Bl = lift_of(Vec::Unit(db, b));
      double lhs = Al.dot(rho_lift * Bl);
      double rhs = rho_base(a, b) - 2.0 * omega(a, b);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  ResidualRecord r;
  r.add("rho' = rho - 2 omega on lifted pairs", worst);

  Vec xi = Vec::Unit(d, 0);
  worst = 0.0;
  for (int a = 0; a < db; ++a) {
    Vec Al = lift_of(Vec::Unit(db, a));
    worst = std::max(worst, std::abs(Al.dot(rho_lift * xi)));
    worst = std::max(worst, std::abs(xi.dot(rho_lift * Al)));
  }
  r.add("rho'(X^L, xi) = 0", worst);

  // Closedness of rho' via order-1 curvature jets.
  CurvatureJets cj = curvature_jets(ls.contact.chart, q, 1);
  JetVec q1 = seed_point(std::span<const double>(q.data(), d), 1);
  JetVec phi1 = ls.contact.phi(q1);
  std::vector<double> drho(d * d * d, 0.0);  // drho[c][a][b] = d_c rho_ab
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Jet rho_ab = q1[0].constant_like(0.0);
      for (int c = 0; c < d; ++c) rho_ab += cj.ricci[a * d + c] * phi1[c * d + b];
      for (int c = 0; c < d; ++c)
        drho[idx3(d, c, a, b)] = rho_ab.partial_derivative(c).value();
    }
  worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        worst = std::max(worst, std::abs(drho[idx3(d, a, b, c)] + drho[idx3(d, b, c, a)] +
                                         drho[idx3(d, c, a, b)]));
  r.add("d rho' = 0", worst);
  return r;
}

/// Sectional curvature of the plane (v, phi v) for unit v in ker eta.
inline double phi_sectional(const LiftStructure& ls, const Vec& q, const Vec& v) {
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  if (std::abs(cv.eta.dot(v)) > 1e-10)
    throw std::invalid_argument("phi_sectional: vector not in the contact distribution");
  if (std::abs(v.dot(cv.g * v) - 1.0) > 1e-10)
    throw std::invalid_argument("phi_sectional: vector is not unit");
  CurvatureSuite suite = curvature_suite(ls.contact.chart, q);
  return sectional(suite, v, cv.phi * v);
}

/// eta-Einstein identity for a Kaehler-Einstein base with Ric = c g:
/// Ric_lift = (c-2) g_lift + (2n-c+2) eta (x) eta.
inline ResidualRecord eta_einstein_check(const LiftStructure& ls, double c, const Vec& q) {
  const int db = ls.dim() - 1;
  const Vec x = q.tail(db);
  CurvatureSuite base_suite = curvature_suite(ls.base->base, x);
  double einstein = (base_suite.ricci - c * base_suite.g).cwiseAbs().maxCoeff();
  if (einstein > 1e-8)
    throw chart_error("eta_einstein_check: base is not Einstein with the given constant, residual " +
                      std::to_string(einstein));

  CurvatureSuite lift_suite = curvature_suite(ls.contact.chart, q);
  detail::ContactValues cv = detail::contact_values(ls.contact, q);
  Mat expected = (c - 2.0) * cv.g + (2.0 * ls.n() - c + 2.0) * cv.eta * cv.eta.transpose();
  ResidualRecord r;
  r.add("eta-Einstein identity", (lift_suite.ricci - expected).cwiseAbs().maxCoeff());
  return r;
}

}  // namespace saslift
