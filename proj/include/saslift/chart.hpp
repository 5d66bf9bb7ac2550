#pragma once
// Coordinate-chart manifolds: a dimension, a jet-evaluable metric, and a
// registry of named tensor fields, plus deterministic point sampling and
// metric-orthonormal frames.  Tensor fields are evaluators (functions of the
// point), never sampled grids, so every identity downstream is checked
// pointwise.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "saslift/jet.hpp"

namespace saslift {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Error for chart-local degeneracies (singular metric, invariant failure).
struct chart_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using JetPoint = std::span<const Jet>;
using JetVec = std::vector<Jet>;

/// Evaluators return components as jets in the same (order, num_vars) space
/// as the input point.  Matrix-valued fields are row-major dim x dim.
using ScalarEval = std::function<Jet(JetPoint)>;
using VectorEval = std::function<JetVec(JetPoint)>;
using OneFormEval = std::function<JetVec(JetPoint)>;
using MatrixEval = std::function<JetVec(JetPoint)>;

/// Per-coordinate sampling interval; every catalog entry declares a box that
/// stays safely inside its chart domain.
struct Box {
  Vec lo, hi;
  static Box centered(int dim, double half_width) {
    Box b;
    b.lo = Vec::Constant(dim, -half_width);
    b.hi = Vec::Constant(dim, half_width);
    return b;
  }
};

struct ChartManifold {
  int dim = 0;
  MatrixEval metric;
  Box sample_box;
  std::map<std::string, VectorEval> vector_fields;
  std::map<std::string, OneFormEval> one_form_fields;
  std::map<std::string, MatrixEval> tensor_fields;  // (1,1) valence
};

// ---------------------------------------------------------------------------
// Small helpers shared by every module.

inline JetVec eval_at(const MatrixEval& f, const Vec& p, int order) {
  JetVec q = seed_point(std::span<const double>(p.data(), p.size()), order);
  return f(q);
}

inline Mat jet_values(const JetVec& m, int rows, int cols) {
  Mat out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = m[i * cols + j].value();
  return out;
}

inline Vec jet_values(const JetVec& v) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

/// Constant vector field, as an evaluator.
inline VectorEval constant_field(const Vec& v) {
  return [v](JetPoint q) {
    JetVec out;
    out.reserve(v.size());
    for (int i = 0; i < v.size(); ++i) out.push_back(q[0].constant_like(v[i]));
    return out;
  };
}

/// Field scaled by a constant.
inline VectorEval scale_field(VectorEval f, double s) {
  return [f = std::move(f), s](JetPoint q) {
    JetVec v = f(q);
    for (auto& c : v) c = c * s;
    return v;
  };
}

/// Constant matrix-valued field (metric, (1,1)-tensor or 2-form components).
inline MatrixEval constant_matrix_field(const Mat& M) {
  return [M](JetPoint q) {
    JetVec out;
    out.reserve(M.rows() * M.cols());
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) out.push_back(q[0].constant_like(M(i, j)));
    return out;
  };
}

// ---------------------------------------------------------------------------
// Metric values with a condition-number guard.

struct MetricData {
  Mat g, ginv;
};

inline MetricData metric_data(const Mat& g, double cond_limit = 1e12) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmax / lmin > cond_limit)
    throw chart_error("metric singular or ill-conditioned at sample point (min eigenvalue " +
                      std::to_string(lmin) + ")");
  MetricData md;
  md.g = g;
  md.ginv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();
  return md;
}

inline Mat metric_value(const ChartManifold& m, const Vec& p) {
  return jet_values(eval_at(m.metric, p, 0), m.dim, m.dim);
}

// ---------------------------------------------------------------------------
// Deterministic sampling.  The raw generator is mapped to [0,1) by hand so the
// stream does not depend on the standard library's distribution internals.

class PointSampler {
 public:
  PointSampler(Box box, std::uint64_t seed) : box_(std::move(box)), rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vec next_point() {
    Vec p(box_.lo.size());
    for (int i = 0; i < p.size(); ++i) p[i] = uniform(box_.lo[i], box_.hi[i]);
    return p;
  }

  /// Component-wise uniform vector in [lo, hi]^dim, for tangent directions.
  Vec next_vector(int dim, double lo = -1.0, double hi = 1.0) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  Box box_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Metric-orthonormal frames via Gram-Schmidt on the coordinate basis.

struct PointFrame {
  Vec point;
  Mat basis;  // columns are frame vectors, g-orthonormal at `point`
};

inline PointFrame orthonormal_frame(const Mat& g, const Vec& p) {
  int d = static_cast<int>(g.rows());
  Mat e = Mat::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    Vec v = e.col(i);
    for (int j = 0; j < i; ++j) v -= (e.col(j).dot(g * v)) * e.col(j);
    double nrm = std::sqrt(v.dot(g * v));
    if (!(nrm > 0.0)) throw chart_error("degenerate metric in Gram-Schmidt");
    e.col(i) = v / nrm;
  }
  return PointFrame{p, e};
}

inline PointFrame orthonormal_frame(const ChartManifold& m, const Vec& p) {
  return orthonormal_frame(metric_value(m, p), p);
}

inline double frame_orthonormality_residual(const Mat& g, const PointFrame& f) {
  Mat gram = f.basis.transpose() * g * f.basis;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace saslift
