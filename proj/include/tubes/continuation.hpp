#pragma once

#include "tubes/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace tubes {

inline constexpr int kGermDegree = 24;
inline constexpr double kStepSafety = 0.5;
inline constexpr double kRadiusCap = 1e6;
inline constexpr double kGermEqualTol = 1e-7;

/// Linear ODE sum_i p_i(zeta) f^(i)(zeta) = 0. coeffs[i] holds p_i in
/// ascending powers of the global variable zeta.
template <class Scalar>
struct LinearOde {
  std::vector<std::vector<std::complex<Scalar>>> coeffs;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Truncated power series sum_k c_k (zeta - center)^k. When `ode` is set the
/// germ stands for the solution of that equation matching these
/// coefficients, and recentering uses the full series instead of the
/// truncation.
template <class Scalar>
struct Germ {
  using C = std::complex<Scalar>;
  C center;
  std::vector<C> coefficients;
  std::optional<Scalar> radius;
  std::optional<LinearOde<Scalar>> ode;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  C operator()(C zeta) const {
    const C t = zeta - center;
    C acc{};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
};

template <class Scalar>
struct PolygonalPath {
  using C = std::complex<Scalar>;
  std::vector<C> vertices;
  bool closed = false;

  /// Regular `segments`-gon on the circle |zeta - center| = radius starting
  /// at angle `start`, traversed counterclockwise; the first vertex is
  /// repeated bit-for-bit at the end.
  static PolygonalPath circle(C center, Scalar radius, int segments = 64, Scalar start = 0) {
    PolygonalPath p;
    p.closed = true;
    for (int k = 0; k < segments; ++k) {
      const Scalar a = start + 2 * std::numbers::pi_v<Scalar> * k / segments;
      p.vertices.push_back(center + std::polar(radius, a));
    }
    p.vertices.push_back(p.vertices.front());
    return p;
  }

  PolygonalPath reversed() const {
    PolygonalPath p{vertices, closed};
    std::reverse(p.vertices.begin(), p.vertices.end());
    return p;
  }
};

template <class Scalar>
struct ContinuationResult {
  Germ<Scalar> finalGerm;
  long stepsTaken = 0;
  Scalar minRadiusSeen = std::numeric_limits<Scalar>::infinity();
};

template <class Scalar>
struct MonodromyResult {
  /// Smallest number of traversals restoring the germ; empty = never returns.
  std::optional<int> order;
  /// Gap to the initial germ after each traversal.
  std::vector<Scalar> gaps;
  /// Constant-term offset from the initial germ after each traversal.
  std::vector<std::complex<Scalar>> offsets;
  long steps = 0;
};

namespace detail {

template <class Scalar>
std::vector<std::complex<Scalar>> poly_recentered(const std::vector<std::complex<Scalar>>& p, std::complex<Scalar> a) {
  // Repeated synthetic division.
  std::vector<std::complex<Scalar>> q = p;
  const auto n = q.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = n - 1; k > j; --k) q[k - 1] += a * q[k];
  }
  return q;
}

// (k + i)! / k!
template <class Scalar>
Scalar rising(int k, int i) {
  Scalar r = 1;
  for (int j = 1; j <= i; ++j) r *= static_cast<Scalar>(k + j);
  return r;
}

// Series data of an ODE solution at centre a: e_k = c_k s^k. Coefficients
// up to order-1 come from `init` (already scaled); the rest follow from the
// recurrence. `terms` grows the vector in place up to index `upto`.
template <class Scalar>
class ScaledRecurrence {
 public:
  using C = std::complex<Scalar>;
  ScaledRecurrence(const LinearOde<Scalar>& ode, C a, C s) : m_(ode.order()) {
    for (const auto& p : ode.coeffs) q_.push_back(poly_recentered(p, a));
    for (int i = 0; i <= m_; ++i) {
      for (std::size_t l = 0; l < q_[i].size(); ++l) q_[i][l] *= std::pow(s, m_ + static_cast<int>(l) - i);
    }
    lead_ = q_[m_].empty() ? C{} : q_[m_][0];
  }

  bool singular() const { return std::abs(lead_) == Scalar(0); }
  int order() const { return m_; }

  void extend(std::vector<C>& e, int upto) const {
    for (int n = static_cast<int>(e.size()) - m_; static_cast<int>(e.size()) <= upto; ++n) {
      C acc{};
      for (int i = 0; i <= m_; ++i) {
        for (int l = 0; l < static_cast<int>(q_[i].size()); ++l) {
          if (i == m_ && l == 0) continue;
          const int idx = n - l + i;
          if (n - l < 0 || idx < 0) continue;
          acc += q_[i][l] * e[idx] * rising<Scalar>(n - l, i);
        }
      }
      e.push_back(-acc / (lead_ * rising<Scalar>(n, m_)));
    }
  }

 private:
  int m_;
  std::vector<std::vector<C>> q_;
  C lead_;
};

template <class Scalar>
std::vector<std::complex<Scalar>> ode_coefficients(const LinearOde<Scalar>& ode, std::complex<Scalar> a,
                                                   std::vector<std::complex<Scalar>> init, int degree) {
  ScaledRecurrence<Scalar> rec(ode, a, std::complex<Scalar>(1));
  if (rec.singular()) throw Error(ErrorKind::ContinuationFailure, "germ centre is a singular point of its ODE");
  init.resize(static_cast<std::size_t>(std::min(rec.order(), degree + 1)));
  rec.extend(init, degree);
  return init;
}

// Recentre along the full ODE series. Empty when the shifted series does not
// converge within 4096 terms.
template <class Scalar>
std::optional<Germ<Scalar>> ode_shift(const Germ<Scalar>& g, std::complex<Scalar> s) {
  using C = std::complex<Scalar>;
  const LinearOde<Scalar>& ode = *g.ode;
  const int m = ode.order();
  ScaledRecurrence<Scalar> rec(ode, g.center, s);
  if (rec.singular()) return std::nullopt;
  std::vector<C> e;
  for (int k = 0; k < m; ++k) e.push_back(g.coefficients[k] * std::pow(s, k));
  constexpr int kMaxTerms = 4096;
  constexpr int kWindow = 16;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon() / 32;
  std::vector<C> sums(static_cast<std::size_t>(m));
  int k = 0;
  for (; k < kMaxTerms; ++k) {
    if (k >= static_cast<int>(e.size())) rec.extend(e, k);
    if (!std::isfinite(std::abs(e[k])) || std::abs(e[k]) > Scalar(1e200)) return std::nullopt;
    Scalar binom = 1;
    for (int i = 0; i < m && i <= k; ++i) {
      sums[i] += binom * e[k];
      binom = binom * static_cast<Scalar>(k - i) / static_cast<Scalar>(i + 1);
    }
    if (k >= 2 * g.degree() && k >= kWindow) {
      Scalar scale = 0, tail = 0;
      for (const C& v : sums) scale = std::max(scale, std::abs(v));
      for (int j = k - kWindow + 1; j <= k; ++j) tail = std::max(tail, std::abs(e[j]) * std::pow(Scalar(j + 1), m));
      if (tail <= eps * scale || tail < std::numeric_limits<Scalar>::min()) break;
    }
  }
  if (k == kMaxTerms) return std::nullopt;
  std::vector<C> init(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) init[i] = sums[i] / std::pow(s, i);
  Germ<Scalar> out{g.center + s, {}, std::nullopt, g.ode};
  rec = ScaledRecurrence<Scalar>(ode, out.center, C(1));
  if (rec.singular()) return std::nullopt;
  init.resize(static_cast<std::size_t>(std::min(m, g.degree() + 1)));
  rec.extend(init, g.degree());
  out.coefficients = std::move(init);
  return out;
}

template <class Scalar>
Germ<Scalar> poly_shift(const Germ<Scalar>& g, std::complex<Scalar> s) {
  // Exact binomial recentring of the truncated polynomial.
  Germ<Scalar> out{g.center + s, poly_recentered(g.coefficients, s), std::nullopt, std::nullopt};
  return out;
}

template <class Scalar>
Germ<Scalar> shift_by(const Germ<Scalar>& g, std::complex<Scalar> s, int depth = 0) {
  if (!g.ode) return poly_shift(g, s);
  if (auto out = ode_shift(g, s)) return *out;
  if (depth >= 20) throw Error(ErrorKind::ContinuationFailure, "shift series does not converge");
  const Germ<Scalar> half = shift_by(g, s / Scalar(2), depth + 1);
  return shift_by(half, s / Scalar(2), depth + 1);
}

template <class Scalar>
void validate(const Germ<Scalar>& g) {
  if (g.degree() < 8) throw Error(ErrorKind::InvalidPoint, "germ degree must be at least 8");
  for (const auto& c : g.coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(ErrorKind::InvalidPoint, "non-finite coefficient");
  }
}

template <class Scalar>
bool close_to(std::complex<Scalar> a, std::complex<Scalar> b) {
  return std::abs(a - b) <= Scalar(1e-12) * std::max(Scalar(1), std::abs(b));
}

}  // namespace detail

/// Cauchy-Hadamard estimate 1 / max_k |c_k|^{1/k} over the top half of the
/// coefficient window, capped at 1e6. The cap is also returned for
/// polynomials (two trailing zeros) and when the ratios |c_{k+1} / c_k| fall
/// like a power of k with exponent below -1/2 (factorial decay: effectively
/// entire). Ratios are used for that test because they ignore the overall
/// scale of the coefficients.
template <class Scalar>
Scalar radius_estimate(const Germ<Scalar>& g) {
  const int d = g.degree();
  const auto& c = g.coefficients;
  if (std::all_of(c.begin(), c.end(), [](const auto& v) { return std::abs(v) == Scalar(0); })) {
    throw Error(ErrorKind::AllZero, "zero germ has no radius");
  }
  const Scalar cap = static_cast<Scalar>(kRadiusCap);
  if (d < 2 || (std::abs(c[d]) == Scalar(0) && std::abs(c[d - 1]) == Scalar(0))) return cap;
  Scalar worst = 0;
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int k = std::max(1, d / 2); k <= d; ++k) {
    const Scalar a = std::abs(c[k]);
    if (a == Scalar(0)) continue;
    worst = std::max(worst, std::pow(a, Scalar(1) / k));
    const Scalar next = k < d ? std::abs(c[k + 1]) : Scalar(0);
    if (next == Scalar(0)) continue;
    const Scalar x = std::log(static_cast<Scalar>(k)), y = std::log(next / a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (worst == Scalar(0)) return cap;
  if (count >= 3) {
    const Scalar slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    if (slope < Scalar(-0.5)) return cap;
  }
  return std::min(cap, Scalar(1) / worst);
}

/// Recentring at `newCenter`; requires |newCenter - center| <= theta * radius.
template <class Scalar>
Germ<Scalar> taylor_shift(const Germ<Scalar>& g, std::complex<Scalar> newCenter, Scalar theta = Scalar(kStepSafety)) {
  detail::validate(g);
  const std::complex<Scalar> s = newCenter - g.center;
  if (std::abs(s) == Scalar(0)) return g;
  const Scalar r = g.radius ? *g.radius : radius_estimate(g);
  if (std::abs(s) > theta * r * (1 + Scalar(1e-12))) {
    throw Error(ErrorKind::StepTooLarge, "shift exceeds theta times the radius estimate");
  }
  Germ<Scalar> out = detail::shift_by(g, s);
  out.radius = radius_estimate(out);
  return out;
}

template <class Scalar>
ContinuationResult<Scalar> continue_along(const Germ<Scalar>& g, const PolygonalPath<Scalar>& path,
                                          Scalar theta = Scalar(kStepSafety)) {
  using C = std::complex<Scalar>;
  detail::validate(g);
  if (path.vertices.size() < 2) throw Error(ErrorKind::InvalidPoint, "path needs at least 2 vertices");
  if (!detail::close_to(path.vertices.front(), g.center)) {
    throw Error(ErrorKind::InvalidPoint, "path does not start at the germ centre");
  }
  if (!(theta > 0 && theta < 1)) throw Error(ErrorKind::InvalidPoint, "theta must lie in (0, 1)");
  constexpr long kMaxSteps = 100000;
  ContinuationResult<Scalar> res{g, 0, std::numeric_limits<Scalar>::infinity()};
  Germ<Scalar>& cur = res.finalGerm;
  std::vector<C> verts = path.vertices;
  if (path.closed && !detail::close_to(verts.back(), verts.front())) verts.push_back(verts.front());
  cur.center = verts.front();
  for (std::size_t v = 1; v < verts.size(); ++v) {
    if (std::abs(verts[v] - verts[v - 1]) == Scalar(0)) throw Error(ErrorKind::InvalidPoint, "repeated path vertex");
    while (true) {
      const C d = verts[v] - cur.center;
      if (std::abs(d) == Scalar(0)) break;
      const Scalar r = radius_estimate(cur);
      res.minRadiusSeen = std::min(res.minRadiusSeen, r);
      if (r < Scalar(1e-9)) throw Error(ErrorKind::ContinuationFailure, "radius estimate collapsed");
      if (++res.stepsTaken > kMaxSteps) throw Error(ErrorKind::ContinuationFailure, "step limit exceeded");
      const Scalar reach = theta * r;
      if (std::abs(d) <= reach) {
        cur = detail::shift_by(cur, d);
        cur.center = verts[v];
      } else {
        cur = detail::shift_by(cur, d / std::abs(d) * reach);
      }
    }
  }
  cur.radius = radius_estimate(cur);
  res.minRadiusSeen = std::min(res.minRadiusSeen, *cur.radius);
  return res;
}

/// Max coefficient difference over degrees 0..D/2. Centres must agree.
template <class Scalar>
Scalar germ_gap(const Germ<Scalar>& a, const Germ<Scalar>& b) {
  if (!detail::close_to(a.center, b.center)) throw Error(ErrorKind::InvalidPoint, "germs have different centres");
  const int top = std::min(a.degree(), b.degree()) / 2;
  Scalar gap = 0;
  for (int k = 0; k <= top; ++k) gap = std::max(gap, std::abs(a.coefficients[k] - b.coefficients[k]));
  return gap;
}

template <class Scalar>
MonodromyResult<Scalar> monodromy_order(const Germ<Scalar>& g, const PolygonalPath<Scalar>& loop, int maxTurns,
                                        Scalar theta = Scalar(kStepSafety)) {
  if (!detail::close_to(loop.vertices.back(), loop.vertices.front()) && !loop.closed) {
    throw Error(ErrorKind::InvalidPoint, "monodromy needs a closed loop");
  }
  MonodromyResult<Scalar> out;
  Germ<Scalar> cur = g;
  for (int k = 1; k <= maxTurns; ++k) {
    ContinuationResult<Scalar> r = continue_along(cur, loop, theta);
    out.steps += r.stepsTaken;
    cur = std::move(r.finalGerm);
    cur.center = g.center;
    const Scalar gap = germ_gap(cur, g);
    out.gaps.push_back(gap);
    out.offsets.push_back(cur.coefficients[0] - g.coefficients[0]);
    if (gap <= Scalar(kGermEqualTol)) {
      out.order = k;
      break;
    }
  }
  return out;
}

template <class Scalar>
Scalar path_independence_check(const Germ<Scalar>& g, const PolygonalPath<Scalar>& a, const PolygonalPath<Scalar>& b,
                               Scalar theta = Scalar(kStepSafety)) {
  if (!detail::close_to(a.vertices.back(), b.vertices.back())) {
    throw Error(ErrorKind::InvalidPoint, "paths end at different points");
  }
  Germ<Scalar> ga = continue_along(g, a, theta).finalGerm;
  Germ<Scalar> gb = continue_along(g, b, theta).finalGerm;
  gb.center = ga.center;
  return germ_gap(ga, gb);
}

// Germ families. Those with an ODE continue exactly; the others are
// polynomials in (zeta - center).

template <class Scalar>
Germ<Scalar> polynomial_germ(std::vector<std::complex<Scalar>> coeffs, std::complex<Scalar> center = {},
                             int degree = kGermDegree) {
  coeffs.resize(static_cast<std::size_t>(std::max<int>(degree + 1, static_cast<int>(coeffs.size()))));
  Germ<Scalar> g{center, std::move(coeffs), std::nullopt, std::nullopt};
  detail::validate(g);
  if (std::any_of(g.coefficients.begin(), g.coefficients.end(), [](const auto& c) { return std::abs(c) != Scalar(0); })) {
    g.radius = radius_estimate(g);
  }
  return g;
}

template <class Scalar>
Germ<Scalar> constant_germ(std::complex<Scalar> value, std::complex<Scalar> center = {}, int degree = kGermDegree) {
  LinearOde<Scalar> ode{{{}, {std::complex<Scalar>(1)}}};
  Germ<Scalar> g = polynomial_germ<Scalar>({value}, center, degree);
  g.ode = ode;
  return g;
}

namespace detail {
template <class Scalar>
Germ<Scalar> family_germ(LinearOde<Scalar> ode, std::complex<Scalar> center, std::vector<std::complex<Scalar>> init,
                         int degree) {
  Germ<Scalar> g{center, ode_coefficients(ode, center, std::move(init), degree), std::nullopt, std::move(ode)};
  validate(g);
  g.radius = radius_estimate(g);
  return g;
}
}  // namespace detail

/// exp(zeta): f' - f = 0.
template <class Scalar>
Germ<Scalar> exp_germ(std::complex<Scalar> center = {}, int degree = kGermDegree) {
  using C = std::complex<Scalar>;
  return detail::family_germ<Scalar>({{{C(-1)}, {C(1)}}}, center, {std::exp(center)}, degree);
}

/// 1/(1 - zeta): (1 - zeta) f' - f = 0.
template <class Scalar>
Germ<Scalar> geometric_germ(std::complex<Scalar> center = {}, int degree = kGermDegree) {
  using C = std::complex<Scalar>;
  return detail::family_germ<Scalar>({{{C(-1)}, {C(1), C(-1)}}}, center, {C(1) / (C(1) - center)}, degree);
}

/// Principal log at `center`: zeta f'' + f' = 0.
template <class Scalar>
Germ<Scalar> log_germ(std::complex<Scalar> center = {1, 0}, int degree = kGermDegree) {
  using C = std::complex<Scalar>;
  return detail::family_germ<Scalar>({{{}, {C(1)}, {C(0), C(1)}}}, center, {std::log(center), C(1) / center}, degree);
}

/// Principal nu-th root at `center`, or `value` when given: nu zeta f' - f = 0.
template <class Scalar>
Germ<Scalar> root_germ(int nu, std::complex<Scalar> center = {1, 0}, std::optional<std::complex<Scalar>> value = {},
                       int degree = kGermDegree) {
  using C = std::complex<Scalar>;
  if (nu < 1) throw Error(ErrorKind::InvalidPoint, "root order must be positive");
  const C v = value ? *value : std::pow(center, Scalar(1) / nu);
  return detail::family_germ<Scalar>({{{C(-1)}, {C(0), C(static_cast<Scalar>(nu))}}}, center, {v}, degree);
}

}  // namespace tubes
