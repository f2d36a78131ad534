#pragma once

// Smooth strongly convex test functions with certified constants mu, L and a
// known minimizer.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixstep/linalg.hpp"
#include "fixstep/random.hpp"

namespace fixstep {

/// Hessian and linear term of f(x) = 1/2 <x, Qx> - <b, x>.
struct QuadraticSpec {
  SpdMatrix Q;
  Vector b;
};

struct Objective {
  std::string name;
  std::size_t dim;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double mu;
  double L;
  Vector minimizer;
  double min_value;
  std::optional<QuadraticSpec> quadratic;
  // Designated start point for tightness runs, when the construction has one.
  std::optional<Vector> witness;
  // Absolute slack on f(x) - f(x*) when x* is only known to solver precision.
  double gap_slack = 0.0;

  double kappa() const noexcept { return L / mu; }

  /// f(x) - f(x*). Quadratics use 1/2 <x - x*, Q (x - x*)>, which avoids the
  /// cancellation in value(x) - min_value.
  double gap(const Vector& x) const {
    if (quadratic) {
      const Vector e = x - minimizer;
      return 0.5 * weighted_inner(e, e, quadratic->Q);
    }
    return value(x) - min_value;
  }
};

inline Objective make_quadratic(QuadraticSpec spec, std::string name = "quadratic") {
  detail::require_same_size(spec.Q.size(), spec.b.size(), "make_quadratic");
  const std::size_t n = spec.Q.size();
  Vector xstar = solve_spd(spec.Q, spec.b);
  const Matrix q = spec.Q.matrix();
  const Vector b = spec.b;
  auto value = [q, b](const Vector& x) { return 0.5 * inner(x, q * x) - inner(b, x); };
  auto gradient = [q, b](const Vector& x) { return q * x - b; };
  const double fstar = value(xstar);
  const double mu = spec.Q.lambda_min();
  const double L = spec.Q.lambda_max();
  return Objective{std::move(name), n,     value, gradient,        mu,          L,
                   xstar,           fstar, std::move(spec), std::nullopt, 0.0};
}

/// 1/2 ||x||^2 in dimension n.
inline Objective make_half_squared_norm(std::size_t n) {
  return make_quadratic({SpdMatrix::identity(n), Vector::zeros(n)}, "half-squared-norm");
}

/// Diagonal quadratic Q = diag(mu, ..., L) with linearly spaced interior
/// eigenvalues and witness point (1, 0, ..., 0, 1). A gradient step with
/// h = 2/(L+mu) from the witness contracts the gap by exactly
/// ((kappa-1)/(kappa+1))^2.
inline Objective make_worstcase_quadratic(double mu, double L, std::size_t n) {
  if (!(mu > 0.0) || !(L >= mu) || !std::isfinite(L)) {
    throw InvalidArgument("make_worstcase_quadratic: need 0 < mu <= L");
  }
  if (n < 2) throw InvalidArgument("make_worstcase_quadratic: need n >= 2");
  auto diag = linspace(mu, L, n);
  Objective obj = make_quadratic({SpdMatrix::diagonal(Vector(diag)), Vector::zeros(n)},
                                 "worst-case-quadratic");
  std::vector<double> w(n, 0.0);
  w.front() = 1.0;
  w.back() = 1.0;
  obj.witness = Vector(std::move(w));
  return obj;
}

/// Random quadratic with spectrum spread on [mu, L] and random linear term.
inline Objective make_random_quadratic(double mu, double L, std::size_t n, Rng& rng) {
  if (!(mu > 0.0) || !(L >= mu)) throw InvalidArgument("make_random_quadratic: need 0 < mu <= L");
  SpdMatrix q(random_symmetric_with_spectrum(linspace(mu, L, n), rng));
  return make_quadratic({std::move(q), random_normal_vector(n, rng)}, "random-quadratic");
}

enum class SmoothKind {
  SoftplusRegularized,  // 1/2 mu ||x||^2 + sum log(1 + exp(a_i^T x)), s'' <= 1/4
  LogCoshRegularized,   // 1/2 mu ||x||^2 + sum log cosh(a_i^T x),     s'' <= 1
};

struct SmoothParams {
  double mu = 1.0;
  std::size_t terms = 3;
  std::uint64_t seed = kDefaultSeed;
  // Explicit term directions a_i; drawn from `seed` when empty.
  std::vector<Vector> directions;
};

namespace detail {

struct ScalarTerm {
  double (*value)(double);
  double (*slope)(double);
  double max_curvature;
};

inline double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
inline double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}
inline double logcosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}
inline double tanh_slope(double t) { return std::tanh(t); }

inline ScalarTerm scalar_term(SmoothKind kind) {
  switch (kind) {
    case SmoothKind::SoftplusRegularized: return {&softplus, &sigmoid, 0.25};
    case SmoothKind::LogCoshRegularized: return {&logcosh, &tanh_slope, 1.0};
  }
  throw InvalidArgument("unsupported smooth objective kind");
}

}  // namespace detail

/// Non-quadratic objective f(x) = mu/2 ||x||^2 + sum_i s(a_i^T x) with s convex
/// and s'' <= s''_max, so L = mu + s''_max * lambda_max(sum a_i a_i^T).
///
/// The minimizer is located by gradient descent with h = 2/(L+mu) down to
/// ||grad|| <= 1e-13; the resulting objective carries a 1e-12 gap slack.
inline Objective make_smooth_nonquadratic(SmoothKind kind, std::size_t dim,
                                          const SmoothParams& params = {}) {
  if (dim == 0) throw InvalidArgument("make_smooth_nonquadratic: dim must be >= 1");
  if (!(params.mu > 0.0)) throw InvalidArgument("make_smooth_nonquadratic: mu must be > 0");
  const auto term = detail::scalar_term(kind);

  std::vector<Vector> dirs = params.directions;
  if (dirs.empty()) {
    Rng rng(params.seed);
    for (std::size_t i = 0; i < params.terms; ++i) dirs.push_back(random_normal_vector(dim, rng));
  }
  Matrix gram(dim);
  for (const auto& a : dirs) {
    detail::require_same_size(a.size(), dim, "make_smooth_nonquadratic term");
    gram = rank_one_update(gram, a, 1.0);
  }
  const double mu = params.mu;
  const double L = mu + term.max_curvature * std::max(0.0, symmetric_eigen(gram).values.back());

  auto value = [dirs, mu, term](const Vector& x) {
    double f = 0.5 * mu * x.squared_norm();
    for (const auto& a : dirs) f += term.value(inner(a, x));
    return f;
  };
  auto gradient = [dirs, mu, term](const Vector& x) {
    Vector g = mu * x;
    for (const auto& a : dirs) g = axpy_neg(g, -term.slope(inner(a, x)), a);
    return g;
  };

  const double h = 2.0 / (L + mu);
  Vector x = Vector::zeros(dim);
  bool found = false;
  for (int it = 0; it < 200000; ++it) {
    const Vector g = gradient(x);
    if (g.norm() <= 1e-13) {
      found = true;
      break;
    }
    x = axpy_neg(x, h, g);
  }
  if (!found) throw ConvergenceFailure("make_smooth_nonquadratic: minimizer search did not converge");

  std::string name =
      kind == SmoothKind::SoftplusRegularized ? "softplus-regularized" : "logcosh-regularized";
  const double fstar = value(x);
  return Objective{std::move(name), dim, value, gradient, mu, L, x, fstar,
                   std::nullopt,    std::nullopt, 1e-12};
}

}  // namespace fixstep
