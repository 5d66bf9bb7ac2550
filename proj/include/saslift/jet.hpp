#pragma once
// Dense truncated multivariate Taylor arithmetic ("jets"): the derivative
// engine behind every connection, curvature and Lie-derivative evaluation.
// A jet holds all partial-derivative coefficients of a scalar quantity at a
// point up to a fixed total degree; arithmetic propagates them exactly, so
// fourth derivatives of composite expressions come out to rounding error.
//
// Storage is dense in graded-lexicographic order.  Sizes are tiny
// (num_vars <= 9, order <= 4, at most 715 coefficients), so a dense table
// with direct convolution for products is the right tool.  Values are
// immutable after construction and all operations are pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saslift {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 9;

/// Exponent vector of a partial derivative, one entry per variable.
using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& m) {
  return std::accumulate(m.begin(), m.end(), 0);
}

inline MultiIndex unit_index(int i, int num_vars) {
  MultiIndex m(num_vars, 0);
  m[i] = 1;
  return m;
}

inline MultiIndex pair_index(int i, int j, int num_vars) {
  MultiIndex m(num_vars, 0);
  m[i] += 1;
  m[j] += 1;
  return m;
}

namespace detail {

inline std::uint32_t pack_exps(const std::uint8_t* e, int n) {
  std::uint32_t key = 0;
  for (int i = 0; i < n; ++i) key |= std::uint32_t(e[i]) << (3 * i);
  return key;
}

struct MulEntry {
  std::uint16_t a, b, dst;
};

// Precomputed index tables for one (num_vars, order) shape, cached for the
// lifetime of the process.  Jets store a pointer to their layout, so shape
// equality is pointer equality.
struct JetLayout {
  int num_vars = 0;
  int order = 0;
  int size = 0;
  std::vector<std::array<std::uint8_t, kMaxJetVars>> exps;  // index -> exponents
  std::vector<int> deg;                                     // index -> total degree
  std::vector<double> fact;                                 // index -> m! (product of factorials)
  std::vector<MulEntry> mul;                                // truncated convolution table
  std::map<std::uint32_t, std::uint16_t> rank;              // packed exponents -> index

  int index_of(const MultiIndex& m) const {
    std::array<std::uint8_t, kMaxJetVars> e{};
    for (int i = 0; i < num_vars; ++i) e[i] = static_cast<std::uint8_t>(m[i]);
    auto it = rank.find(pack_exps(e.data(), num_vars));
    if (it == rank.end()) throw std::invalid_argument("jet: multi-index out of range");
    return it->second;
  }
};

inline void enumerate_degree(int num_vars, int var, int remaining,
                             std::array<std::uint8_t, kMaxJetVars>& cur,
                             std::vector<std::array<std::uint8_t, kMaxJetVars>>& out) {
  if (var == num_vars - 1) {
    cur[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(num_vars, var + 1, remaining - e, cur, out);
  }
}

inline const JetLayout& jet_layout(int num_vars, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw std::invalid_argument("jet: order must be in [0, " + std::to_string(kMaxJetOrder) +
                                "], got " + std::to_string(order));
  if (num_vars < 1 || num_vars > kMaxJetVars)
    throw std::invalid_argument("jet: num_vars must be in [1, " + std::to_string(kMaxJetVars) +
                                "], got " + std::to_string(num_vars));

  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{num_vars, order}];
  if (slot) return *slot;

  auto lay = std::make_unique<JetLayout>();
  lay->num_vars = num_vars;
  lay->order = order;
  std::array<std::uint8_t, kMaxJetVars> cur{};
  for (int d = 0; d <= order; ++d) enumerate_degree(num_vars, 0, d, cur, lay->exps);
  lay->size = static_cast<int>(lay->exps.size());
  lay->deg.resize(lay->size);
  lay->fact.resize(lay->size);
  for (int k = 0; k < lay->size; ++k) {
    int d = 0;
    double f = 1.0;
    for (int i = 0; i < num_vars; ++i) {
      d += lay->exps[k][i];
      for (int j = 2; j <= lay->exps[k][i]; ++j) f *= j;
    }
    lay->deg[k] = d;
    lay->fact[k] = f;
    lay->rank[pack_exps(lay->exps[k].data(), num_vars)] = static_cast<std::uint16_t>(k);
  }
  for (int a = 0; a < lay->size; ++a)
    for (int b = 0; b < lay->size; ++b) {
      if (lay->deg[a] + lay->deg[b] > order) continue;
      std::array<std::uint8_t, kMaxJetVars> sum{};
      for (int i = 0; i < num_vars; ++i) sum[i] = lay->exps[a][i] + lay->exps[b][i];
      auto it = lay->rank.find(pack_exps(sum.data(), num_vars));
      lay->mul.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), it->second});
    }
  const JetLayout& ref = *lay;
  slot = std::move(lay);
  return ref;
}

}  // namespace detail

class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int order, int num_vars) {
    Jet j(detail::jet_layout(num_vars, order));
    j.c_[0] = value;
    return j;
  }

  /// Coordinate function x^i seeded at `value`: constant term `value`,
  /// first-order coefficient of x^i equal to one, everything else zero.
  static Jet variable(int i, double value, int order, int num_vars) {
    if (i < 0 || i >= num_vars)
      throw std::invalid_argument("jet: variable index " + std::to_string(i) +
                                  " out of range for num_vars " + std::to_string(num_vars));
    Jet j(detail::jet_layout(num_vars, order));
    j.c_[0] = value;
    if (order >= 1) j.c_[j.lay_->index_of(unit_index(i, num_vars))] = 1.0;
    return j;
  }

  Jet constant_like(double value) const {
    Jet j(*lay_);
    j.c_[0] = value;
    return j;
  }

  int order() const { return lay_->order; }
  int num_vars() const { return lay_->num_vars; }
  int size() const { return lay_ ? lay_->size : 0; }
  bool initialized() const { return lay_ != nullptr; }

  double value() const {
    if (c_.empty()) throw std::logic_error("jet: use of uninitialized jet");
    return c_[0];
  }

  double coeff(const MultiIndex& m) const {
    check_index(m);
    return c_[lay_->index_of(m)];
  }

  /// Partial derivative d^m f = coeff(m) * m!.
  double partial(const MultiIndex& m) const {
    check_index(m);
    int k = lay_->index_of(m);
    return c_[k] * lay_->fact[k];
  }

  /// Same jet with coefficients of degree > new_order dropped.
  Jet truncated(int new_order) const {
    if (new_order == order()) return *this;
    if (new_order > order()) throw std::invalid_argument("jet: cannot extend truncation order");
    Jet j(detail::jet_layout(num_vars(), new_order));
    for (int k = 0; k < j.lay_->size; ++k) c_at(j, k) = c_[lay_->index_of(to_multi(j, k))];
    return j;
  }

  /// d/dx_i as a jet of one order less.
  Jet partial_derivative(int i) const {
    if (order() == 0) throw std::invalid_argument("jet: cannot differentiate an order-0 jet");
    Jet j(detail::jet_layout(num_vars(), order() - 1));
    for (int k = 0; k < j.lay_->size; ++k) {
      MultiIndex m = to_multi(j, k);
      int mi = m[i];
      m[i] += 1;
      c_at(j, k) = c_[lay_->index_of(m)] * (mi + 1);
    }
    return j;
  }

  Jet operator-() const {
    Jet j(*lay_);
    for (int k = 0; k < lay_->size; ++k) j.c_[k] = -c_[k];
    return j;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    a.check_match(b);
    Jet j(*a.lay_);
    for (int k = 0; k < a.lay_->size; ++k) j.c_[k] = a.c_[k] + b.c_[k];
    return j;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    a.check_match(b);
    Jet j(*a.lay_);
    for (int k = 0; k < a.lay_->size; ++k) j.c_[k] = a.c_[k] - b.c_[k];
    return j;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_match(b);
    Jet j(*a.lay_);
    for (const auto& e : a.lay_->mul) j.c_[e.dst] += a.c_[e.a] * b.c_[e.b];
    return j;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(const Jet& a, double s) {
    Jet j = a;
    j.c_[0] += s;
    return j;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet j(*a.lay_);
    for (int k = 0; k < a.lay_->size; ++k) j.c_[k] = a.c_[k] * s;
    return j;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

  /// f(u) for univariate f given the Taylor coefficients of f at the constant
  /// term of u: evaluates sum_k cs[k] * (u - u0)^k by Horner.  The nonconstant
  /// part of u is nilpotent, so the truncated sum is exact.
  static Jet compose_series(const Jet& u, std::span<const double> cs) {
    Jet w = u;
    w.c_[0] = 0.0;
    Jet r = u.constant_like(cs[cs.size() - 1]);
    for (int k = static_cast<int>(cs.size()) - 2; k >= 0; --k) r = r * w + cs[k];
    return r;
  }

  friend Jet reciprocal(const Jet& u) {
    double u0 = u.value();
    if (u0 == 0.0) throw std::domain_error("jet: division by jet with zero constant term");
    std::array<double, kMaxJetOrder + 1> cs{};
    double p = 1.0 / u0;
    for (int k = 0; k <= u.order(); ++k) {
      cs[k] = p;
      p *= -1.0 / u0;
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

  friend Jet exp(const Jet& u) {
    std::array<double, kMaxJetOrder + 1> cs{};
    double e = std::exp(u.value());
    double f = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
      cs[k] = e / f;
      f *= (k + 1);
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

  friend Jet log(const Jet& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw std::domain_error("jet: log of jet with non-positive constant term");
    std::array<double, kMaxJetOrder + 1> cs{};
    cs[0] = std::log(u0);
    double p = 1.0 / u0;
    for (int k = 1; k <= u.order(); ++k) {
      cs[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
      p /= u0;
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

  friend Jet sqrt(const Jet& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw std::domain_error("jet: sqrt of jet with non-positive constant term");
    return pow(u, 0.5);
  }

  friend Jet sin(const Jet& u) {
    std::array<double, kMaxJetOrder + 1> cs{};
    double s = std::sin(u.value()), c = std::cos(u.value());
    double f = 1.0;
    const double cycle[4] = {s, c, -s, -c};
    for (int k = 0; k <= u.order(); ++k) {
      cs[k] = cycle[k % 4] / f;
      f *= (k + 1);
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

  friend Jet cos(const Jet& u) {
    std::array<double, kMaxJetOrder + 1> cs{};
    double s = std::sin(u.value()), c = std::cos(u.value());
    double f = 1.0;
    const double cycle[4] = {c, -s, -c, s};
    for (int k = 0; k <= u.order(); ++k) {
      cs[k] = cycle[k % 4] / f;
      f *= (k + 1);
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

  /// u^p.  Integer p works for any nonzero base (positive p also for zero
  /// base); fractional p requires a positive constant term.
  friend Jet pow(const Jet& u, double p) {
    double ip = 0.0;
    if (std::modf(p, &ip) == 0.0 && std::abs(ip) <= 64) {
      int n = static_cast<int>(ip);
      if (n == 0) return u.constant_like(1.0);
      Jet r = u.constant_like(1.0);
      for (int k = 0; k < std::abs(n); ++k) r = r * u;
      return n > 0 ? r : reciprocal(r);
    }
    double u0 = u.value();
    if (u0 <= 0.0)
      throw std::domain_error("jet: fractional power of jet with non-positive constant term");
    std::array<double, kMaxJetOrder + 1> cs{};
    double binom = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
      cs[k] = binom * std::pow(u0, p - k);
      binom *= (p - k) / (k + 1);
    }
    return compose_series(u, std::span<const double>(cs.data(), u.order() + 1));
  }

 private:
  explicit Jet(const detail::JetLayout& lay) : lay_(&lay), c_(lay.size, 0.0) {}

  static double& c_at(Jet& j, int k) { return j.c_[k]; }

  static MultiIndex to_multi(const Jet& j, int k) {
    MultiIndex m(j.num_vars());
    for (int i = 0; i < j.num_vars(); ++i) m[i] = j.lay_->exps[k][i];
    return m;
  }

  void check_match(const Jet& b) const {
    if (lay_ == nullptr || b.lay_ == nullptr)
      throw std::logic_error("jet: use of uninitialized jet");
    if (lay_ != b.lay_)
      throw std::invalid_argument("jet: arithmetic on jets with mismatched order or num_vars");
  }

  void check_index(const MultiIndex& m) const {
    if (static_cast<int>(m.size()) != num_vars())
      throw std::invalid_argument("jet: multi-index length does not match num_vars");
    for (int e : m)
      if (e < 0) throw std::invalid_argument("jet: negative exponent in multi-index");
    if (degree(m) > order()) throw std::invalid_argument("jet: multi-index degree exceeds order");
  }

  const detail::JetLayout* lay_ = nullptr;
  std::vector<double> c_;
};

/// All coordinate functions of a point seeded as jets.
inline std::vector<Jet> seed_point(std::span<const double> p, int order) {
  std::vector<Jet> q;
  q.reserve(p.size());
  int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) q.push_back(Jet::variable(i, p[i], order, n));
  return q;
}

/// All partials up to `order` of each output of a jet-evaluable map,
/// symmetric in the multi-index by construction.
struct DerivativeTensor {
  std::vector<Jet> component;  // one jet per output
  double value(int a) const { return component[a].value(); }
  double partial(int a, const MultiIndex& m) const { return component[a].partial(m); }
};

template <typename F>
DerivativeTensor derivative_tensor(F&& f, std::span<const double> p, int order) {
  std::vector<Jet> q = seed_point(p, order);
  return DerivativeTensor{f(std::span<const Jet>(q))};
}

}  // namespace saslift
