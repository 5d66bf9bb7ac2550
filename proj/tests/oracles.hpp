#pragma once
// Test-only oracles, independent of the jet engine: central finite
// differences for first and second partials, and closed-form reference
// geometry (conformal-metric Christoffels, constant-curvature values) used
// to pin expected numbers before the implementation existed.

#include <cmath>
#include <functional>

#include "saslift/chart.hpp"

namespace oracles {

using saslift::Vec;

using RealFn = std::function<double(const Vec&)>;

inline double central_diff_1(const RealFn& f, Vec p, int i, double h = 1e-4) {
  Vec a = p, b = p;
  a[i] += h;
  b[i] -= h;
  return (f(a) - f(b)) / (2.0 * h);
}

inline double central_diff_2(const RealFn& f, Vec p, int i, int j, double h = 1e-4) {
  if (i == j) {
    Vec a = p, b = p;
    a[i] += h;
    b[i] -= h;
    return (f(a) - 2.0 * f(p) + f(b)) / (h * h);
  }
  Vec pp = p, pm = p, mp = p, mm = p;
  pp[i] += h;
  pp[j] += h;
  pm[i] += h;
  pm[j] -= h;
  mp[i] -= h;
  mp[j] += h;
  mm[i] -= h;
  mm[j] -= h;
  return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
}

/// Evaluate a jet-based scalar evaluator at a plain point.
inline RealFn as_real_fn(const saslift::ScalarEval& f) {
  return [f](const Vec& p) {
    auto q = saslift::seed_point(std::span<const double>(p.data(), p.size()), 0);
    return f(q).value();
  };
}

/// Component (i, j) of a jet-based matrix evaluator as a plain function.
inline RealFn matrix_component_fn(const saslift::MatrixEval& f, int dim, int i, int j) {
  return [f, dim, i, j](const Vec& p) {
    auto q = saslift::seed_point(std::span<const double>(p.data(), p.size()), 0);
    return f(q)[i * dim + j].value();
  };
}

/// Christoffel symbols of a conformal metric g = h(p) * delta, from the
/// closed form Gamma^a_{bc} = (delta^a_b d_c log h + delta^a_c d_b log h
/// - delta_{bc} d_a log h) / 2, with d log h supplied analytically.
inline double conformal_christoffel(const Vec& dlogh, int a, int b, int c) {
  double s = 0.0;
  if (a == b) s += dlogh[c];
  if (a == c) s += dlogh[b];
  if (b == c) s -= dlogh[a];
  return 0.5 * s;
}

}  // namespace oracles
