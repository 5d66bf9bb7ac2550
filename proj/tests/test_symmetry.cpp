#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "saslift/catalog.hpp"
#include "saslift/symmetry.hpp"

using namespace saslift;

namespace {

LiftStructure lift_of(const char* name, int n = 1) {
  return build_lift(build_catalog(name, {n, 1.0}).ks);
}

VectorEval field_of(const BuiltManifold& bm, const std::string& name) {
  for (const auto& [fname, f] : bm.symmetry_fields)
    if (fname == name) return f;
  throw std::runtime_error("no field " + name);
}

std::vector<Vec> base_points(const KahlerStructure& ks, int count, std::uint64_t seed) {
  PointSampler s(ks.base.sample_box, seed);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) pts.push_back(s.next_point());
  return pts;
}

}  // namespace

TEST_CASE("measured symmetry flags of the catalog fields") {
  BuiltManifold flat = build_catalog("flat", {1, 0.0});
  SymmetryMeasurement rot =
      measure_symmetry(flat.ks, field_of(flat, "rotation"), base_points(flat.ks, 10, 3));
  CHECK(rot.is_killing());
  CHECK(rot.is_holomorphic());
  CHECK(rot.is_symplectic());

  SymmetryMeasurement eul =
      measure_symmetry(flat.ks, field_of(flat, "euler"), base_points(flat.ks, 10, 4));
  CHECK(eul.is_holomorphic());
  CHECK_FALSE(eul.is_killing());
  CHECK_FALSE(eul.is_symplectic());

  BuiltManifold fs = build_catalog("fubini-study", {1, 0.0});
  SymmetryMeasurement fsrot =
      measure_symmetry(fs.ks, field_of(fs, "rotation"), base_points(fs.ks, 10, 5));
  CHECK(fsrot.is_killing());
  CHECK(fsrot.is_holomorphic());
  CHECK(fsrot.is_symplectic());
}

TEST_CASE("holomorphic lifts: rotation and Euler fields on the flat base") {
  LiftStructure ls = lift_of("flat");
  BuiltManifold bm = build_catalog("flat", {1, 0.0});
  PointSampler s(ls.contact.chart.sample_box, 7);
  for (int it = 0; it < 5; ++it) {
    Vec q = s.next_point();
    CHECK(automorphism_lift_residual(ls, field_of(bm, "rotation"), q).max_abs() < 1e-9);
    CHECK(automorphism_lift_residual(ls, field_of(bm, "euler"), q).max_abs() < 1e-9);
    CHECK(automorphism_lift_residual(ls, constant_field(Vec::Zero(2)), q).max_abs() == 0.0);
  }
}

TEST_CASE("Killing lifts: rotation fields on flat and Fubini-Study bases") {
  for (const char* name : {"flat", "fubini-study"}) {
    LiftStructure ls = lift_of(name);
    BuiltManifold bm = build_catalog(name, {1, 0.0});
    PointSampler s(ls.contact.chart.sample_box, 11);
    for (int it = 0; it < 5; ++it) {
      Vec q = s.next_point();
      CHECK(killing_lift_residual(ls, field_of(bm, "rotation"), q).max_abs() < 1e-8);
    }
  }
  // Euler is not Killing: precondition must reject it.
  LiftStructure flat = lift_of("flat");
  BuiltManifold bm = build_catalog("flat", {1, 0.0});
  Vec q(3);
  q << 0.2, 0.4, -0.6;
  CHECK_THROWS_AS(killing_lift_residual(flat, field_of(bm, "euler"), q), chart_error);
}

TEST_CASE("form automorphism lifts and the Euler rejection") {
  LiftStructure ls = lift_of("flat");
  BuiltManifold bm = build_catalog("flat", {1, 0.0});
  PointSampler s(ls.contact.chart.sample_box, 13);
  for (int it = 0; it < 5; ++it) {
    Vec q = s.next_point();
    ResidualRecord r = form_automorphism_residual(ls, field_of(bm, "rotation"), q);
    CHECK(r["L_{V^L} Phi = 0"] < 1e-9);
    CHECK(r["d(L_{V^L} eta) = 0"] < 1e-9);
    CHECK(form_automorphism_residual(ls, constant_field(Vec::Zero(2)), q).max_abs() == 0.0);
  }
  // L_{Euler} omega = 2 omega != 0: homothetic, not symplectic.
  Vec q(3);
  q << 0.0, 0.3, 0.5;
  CHECK_THROWS_AS(form_automorphism_residual(ls, field_of(bm, "euler"), q), chart_error);
}

TEST_CASE("combined theorem for full automorphisms") {
  for (const char* name : {"flat", "fubini-study"}) {
    LiftStructure ls = lift_of(name);
    BuiltManifold bm = build_catalog(name, {1, 0.0});
    PointSampler s(ls.contact.chart.sample_box, 17);
    for (int it = 0; it < 5; ++it) {
      Vec q = s.next_point();
      ResidualRecord r = combined_theorem_residual(ls, field_of(bm, "rotation"), q);
      CHECK(r["L_{V^L} phi = 2 alpha (x) xi"] < 1e-8);
      CHECK(r["L_{V^L} g = 4 alpha^phi . eta"] < 1e-8);
      CHECK(r["L_{V^L} Phi = 0"] < 1e-8);
      CHECK(r["d alpha^phi = 0"] < 1e-8);
    }
  }
}

TEST_CASE("hamiltonian_of: rotation field on the flat base") {
  BuiltManifold flat = build_catalog("flat", {1, 0.0});
  VectorEval rot = field_of(flat, "rotation");
  CHECK(hamiltonian_of(flat.ks, rot, Vec::Zero(2)) == 0.0);

  // dH = omega(V, .) checked with jets at fresh points, and H is the
  // rotation Hamiltonian r^2/2 up to the structure's sign.
  ScalarEval H = hamiltonian_field(flat.ks, rot);
  PointSampler s(flat.ks.base.sample_box, 19);
  for (int it = 0; it < 50; ++it) {
    Vec p = s.next_point();
    JetVec q1 = seed_point(std::span<const double>(p.data(), 2), 1);
    Jet h = H(q1);
    JetVec w = flat.ks.omega(q1);
    JetVec v = rot(q1);
    for (int b = 0; b < 2; ++b) {
      Jet gamma_b = v[0] * w[0 * 2 + b] + v[1] * w[1 * 2 + b];
      CHECK(std::abs(h.partial_derivative(b).value() - gamma_b.value()) < 1e-7);
    }
    CHECK(std::abs(std::abs(h.value()) - 0.5 * p.squaredNorm()) < 1e-10);
  }

  // Euler is not symplectic; no Hamiltonian exists.
  CHECK_THROWS_AS(hamiltonian_of(flat.ks, field_of(flat, "euler"), Vec::Zero(2)), chart_error);
}

TEST_CASE("corrected automorphism U_V = V^L - 2H xi, with the sign probe") {
  for (const char* name : {"flat", "fubini-study"}) {
    LiftStructure ls = lift_of(name);
    BuiltManifold bm = build_catalog(name, {1, 0.0});
    VectorEval rot = field_of(bm, "rotation");
    PointSampler s(ls.contact.chart.sample_box, 23);
    double worst_good = 0.0, worst_bad = 0.0;
    for (int it = 0; it < 5; ++it) {
      Vec q = s.next_point();
      worst_good = std::max(worst_good, corrected_automorphism_residual(ls, rot, q).max_abs());
      worst_bad =
          std::max(worst_bad, corrected_automorphism_residual(ls, rot, q, +2.0).max_abs());
    }
    CHECK(worst_good < 1e-8);
    CHECK(worst_bad > 1e-3);  // the opposite sign is decisively wrong
  }

  LiftStructure flat = lift_of("flat");
  Vec q(3);
  q << 0.1, 0.2, 0.3;
  CHECK(corrected_automorphism_residual(flat, constant_field(Vec::Zero(2)), q).max_abs() == 0.0);
}

TEST_CASE("J maps holomorphic fields to holomorphic fields") {
  BuiltManifold flat = build_catalog("flat", {2, 0.0});
  const Mat& J = flat.ks.J;
  for (const char* fname : {"rotation", "euler"}) {
    VectorEval V = field_of(flat, fname);
    VectorEval JV = [V, J](JetPoint q) {
      JetVec v = V(q);
      JetVec out(v.size(), q[0].constant_like(0.0));
      for (int a = 0; a < J.rows(); ++a)
        for (int b = 0; b < J.cols(); ++b)
          if (J(a, b) != 0.0) out[a] += v[b] * J(a, b);
      return out;
    };
    auto pts = base_points(flat.ks, 10, 29);
    SymmetryMeasurement mv = measure_symmetry(flat.ks, V, pts);
    SymmetryMeasurement mjv = measure_symmetry(flat.ks, JV, pts);
    CHECK(mv.is_holomorphic());
    CHECK(mjv.is_holomorphic());
  }
}

TEST_CASE("two of the three automorphism conditions imply the third") {
  for (const char* name : {"flat", "fubini-study", "complex-hyperbolic", "cigar"}) {
    BuiltManifold bm = build_catalog(name, {1, 0.0});
    SymmetryMeasurement m =
        measure_symmetry(bm.ks, field_of(bm, "rotation"), base_points(bm.ks, 10, 31));
    int below = int(m.is_killing()) + int(m.is_holomorphic()) + int(m.is_symplectic());
    REQUIRE(below >= 2);
    CHECK(m.killing < 1e-8);
    CHECK(m.holomorphic < 1e-8);
    CHECK(m.symplectic < 1e-8);
  }
}
