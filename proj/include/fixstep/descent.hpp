#pragma once

// Fixed-step descent schemes and their certified per-step contraction
// factors on the function-value gap f(x) - f(x*).
//
//   method                 hbar                                   factor at h
//   gradient               2/(L+mu)                               (1-h mu)^2, or (hL-1)^2 past hbar (h < 2/L)
//   variable metric        2/(L/lam + mu/Lam)                     (1 - h mu/Lam)^2
//   gradient related       2cos/(Lc(1+sin) + mu c(1-sin))         (1 - h mu c (1-sin)/cos)^2
//   relaxed (th', c1, c2)  2cos'/(L c2(1+sin') + mu c1(1-sin'))   (1 - h mu c1 (1-sin')/cos')^2
//   inexact (eps)          2/(L(1+eps) + mu(1-eps))               (1 - h mu (1-eps))^2
//
// At h = hbar every factor equals ((k-1)/(k+1))^2 with k the method's
// effective condition number.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "fixstep/linalg.hpp"
#include "fixstep/metrics.hpp"
#include "fixstep/objectives.hpp"
#include "fixstep/random.hpp"

namespace fixstep {

enum class Method {
  Gradient,
  VariableMetric,
  GradientRelated,
  GradientRelatedRelaxed,
  InexactGradient,
  ExactLineSearch,
};

constexpr std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Gradient: return "gradient";
    case Method::VariableMetric: return "variable-metric";
    case Method::GradientRelated: return "gradient-related";
    case Method::GradientRelatedRelaxed: return "gradient-related-relaxed";
    case Method::InexactGradient: return "inexact";
    case Method::ExactLineSearch: return "exact-line-search";
  }
  return "unknown";
}

struct GradientParams {};
struct VariableMetricParams {
  SpdMatrix metric;
};
struct AngleScalingParams {
  Angle theta;
  double c;
};
struct RelaxedAngleParams {
  Angle theta_prime;
  double c1;
  double c2;
};
struct InexactParams {
  double epsilon;
};

using MethodParams =
    std::variant<GradientParams, VariableMetricParams, AngleScalingParams, RelaxedAngleParams, InexactParams>;

/// ((k-1)/(k+1))^2
inline double optimal_contraction(double kappa) noexcept {
  const double q = (kappa - 1.0) / (kappa + 1.0);
  return q * q;
}

namespace detail {

inline void require_constants(double mu, double L) {
  if (!(mu > 0.0) || !(L >= mu) || !std::isfinite(L)) {
    throw InvalidArgument("need constants 0 < mu <= L");
  }
}

// 1 - sin(theta) without cancellation near pi/2
inline double one_minus_sin(const Angle& a) noexcept { return a.cos() * a.cos() / (1.0 + a.sin()); }

inline double squared(double x) noexcept { return x * x; }

}  // namespace detail

/// Contraction factor of one gradient step: (1-h mu)^2 for h <= 2/(L+mu) and
/// (hL-1)^2 for 2/(L+mu) < h < 2/L. No certified factor exists for h >= 2/L.
inline double gradient_rate(double mu, double L, double h) {
  detail::require_constants(mu, L);
  if (!(h >= 0.0)) throw InvalidArgument("gradient_rate: step size must be >= 0");
  if (h >= 2.0 / L) throw InvalidArgument("gradient_rate: h >= 2/L has no certified contraction");
  return h <= 2.0 / (L + mu) ? detail::squared(1.0 - h * mu) : detail::squared(h * L - 1.0);
}

struct StepPlan {
  Method method;
  double h;
  double hbar;
  double predicted_factor;
  double mu;
  double L;
  double kappa;  // effective condition number of the method
  MethodParams params;

  /// Certified contraction factor for step size `step`. Past the
  /// certified window this is the formula value only, without guarantee.
  double factor_at(double step) const {
    using detail::squared;
    switch (method) {
      case Method::Gradient:
        return step <= 2.0 / (L + mu) ? squared(1.0 - step * mu) : squared(step * L - 1.0);
      case Method::VariableMetric: {
        const auto& a = std::get<VariableMetricParams>(params).metric;
        return squared(1.0 - step * mu / a.lambda_max());
      }
      case Method::GradientRelated: {
        const auto& p = std::get<AngleScalingParams>(params);
        return squared(1.0 - step * mu * p.c * detail::one_minus_sin(p.theta) / p.theta.cos());
      }
      case Method::GradientRelatedRelaxed: {
        const auto& p = std::get<RelaxedAngleParams>(params);
        return squared(1.0 - step * mu * p.c1 * detail::one_minus_sin(p.theta_prime) /
                                 p.theta_prime.cos());
      }
      case Method::InexactGradient: {
        const auto& p = std::get<InexactParams>(params);
        return squared(1.0 - step * mu * (1.0 - p.epsilon));
      }
      case Method::ExactLineSearch:
        return optimal_contraction(kappa);
    }
    return 1.0;
  }

  /// Data-dependent inexact factor (1 - h mu (1 - rho))^2, rho = ||d-g||/||g||.
  double data_factor_at(double step, double rho) const {
    return detail::squared(1.0 - step * mu * (1.0 - rho));
  }

  /// Largest certified step: 2/L (exclusive) for the gradient method, hbar
  /// (inclusive) otherwise.
  double certified_limit() const noexcept { return method == Method::Gradient ? 2.0 / L : hbar; }

  bool certifies(double step) const noexcept {
    if (!(step >= 0.0)) return false;
    return method == Method::Gradient ? step < 2.0 / L : step <= hbar;
  }

  bool certified() const noexcept { return certifies(h); }

  double bound_at_hbar() const { return factor_at(hbar); }

  /// Same plan at another step size inside the certified window.
  StepPlan with_step(double step) const {
    if (!certifies(step)) {
      throw InvalidArgument("step size " + std::to_string(step) + " outside certified window [0, " +
                            std::to_string(certified_limit()) + "]");
    }
    return with_uncertified_step(step);
  }

  /// Same plan at any nonnegative step size; the result may be uncertified.
  StepPlan with_uncertified_step(double step) const {
    if (!(step >= 0.0)) throw InvalidArgument("step size must be >= 0");
    StepPlan p = *this;
    p.h = step;
    p.predicted_factor = factor_at(step);
    return p;
  }
};

inline StepPlan gradient_plan(double mu, double L) {
  detail::require_constants(mu, L);
  const double hbar = 2.0 / (L + mu);
  StepPlan p{Method::Gradient, hbar, hbar, 0.0, mu, L, L / mu, GradientParams{}};
  p.predicted_factor = p.factor_at(hbar);
  return p;
}

inline StepPlan gradient_plan(const Objective& obj) { return gradient_plan(obj.mu, obj.L); }

/// Plan for x+ = x - h A^{-1} grad f(x) with spectrum(A) in [lam, Lam].
inline StepPlan variable_metric_plan(double mu, double L, SpdMatrix metric) {
  detail::require_constants(mu, L);
  const double lam = metric.lambda_min();
  const double Lam = metric.lambda_max();
  const double hbar = 2.0 / (L / lam + mu / Lam);
  StepPlan p{Method::VariableMetric, hbar, hbar, 0.0, mu, L, (L / mu) * (Lam / lam),
             VariableMetricParams{std::move(metric)}};
  p.predicted_factor = p.factor_at(hbar);
  return p;
}

inline StepPlan variable_metric_plan(const Objective& obj, SpdMatrix metric) {
  detail::require_same_size(obj.dim, metric.size(), "variable_metric_plan");
  return variable_metric_plan(obj.mu, obj.L, std::move(metric));
}

/// Plan for x+ = x - h d with <g, d> = cos ||g|| ||d|| and ||d|| = c ||g||.
inline StepPlan gradient_related_plan(double mu, double L, Angle theta, double c) {
  detail::require_constants(mu, L);
  require_cos_floor(theta.cos(), "gradient_related_plan");
  if (!(c > 0.0)) throw InvalidArgument("gradient_related_plan: c must be > 0");
  const double hbar = 2.0 * theta.cos() /
                      (L * c * (1.0 + theta.sin()) + mu * c * detail::one_minus_sin(theta));
  StepPlan p{Method::GradientRelated, hbar, hbar, 0.0, mu, L, (L / mu) * theta.condition_factor(),
             AngleScalingParams{theta, c}};
  p.predicted_factor = p.factor_at(hbar);
  return p;
}

inline StepPlan gradient_related_plan(const Objective& obj, double cos_theta, double c) {
  require_cos_floor(cos_theta, "gradient_related_plan");
  return gradient_related_plan(obj.mu, obj.L, Angle::from_cos(cos_theta), c);
}

inline StepPlan gradient_related_plan(const Objective& obj, Angle theta, double c) {
  return gradient_related_plan(obj.mu, obj.L, theta, c);
}

/// Plan under theta <= theta' and c1 ||g|| <= ||d|| <= c2 ||g||.
inline StepPlan gradient_related_relaxed_plan(double mu, double L, Angle theta_prime, double c1,
                                              double c2) {
  detail::require_constants(mu, L);
  require_cos_floor(theta_prime.cos(), "gradient_related_relaxed_plan");
  if (!(c1 > 0.0)) throw InvalidArgument("gradient_related_relaxed_plan: c1 must be > 0");
  if (c1 > c2) throw InvalidArgument("gradient_related_relaxed_plan: c1 exceeds c2");
  const double hbar =
      2.0 * theta_prime.cos() /
      (L * c2 * (1.0 + theta_prime.sin()) + mu * c1 * detail::one_minus_sin(theta_prime));
  StepPlan p{Method::GradientRelatedRelaxed, hbar, hbar, 0.0, mu, L,
             (L / mu) * (c2 / c1) * theta_prime.condition_factor(),
             RelaxedAngleParams{theta_prime, c1, c2}};
  p.predicted_factor = p.factor_at(hbar);
  return p;
}

inline StepPlan gradient_related_relaxed_plan(const Objective& obj, Angle theta_prime, double c1,
                                              double c2) {
  return gradient_related_relaxed_plan(obj.mu, obj.L, theta_prime, c1, c2);
}

/// Plan for ||d - g|| <= eps ||g||, eps in [0, 1 - 1e-8].
inline StepPlan inexact_gradient_plan(double mu, double L, double epsilon) {
  detail::require_constants(mu, L);
  if (!(epsilon >= 0.0) || epsilon > 1.0 - 1e-8) {
    throw InvalidArgument("inexact_gradient_plan: epsilon must lie in [0, 1)");
  }
  const double hbar = 2.0 / (L * (1.0 + epsilon) + mu * (1.0 - epsilon));
  StepPlan p{Method::InexactGradient, hbar, hbar, 0.0, mu, L,
             (L / mu) * ((1.0 + epsilon) / (1.0 - epsilon)), InexactParams{epsilon}};
  p.predicted_factor = p.factor_at(hbar);
  return p;
}

inline StepPlan inexact_gradient_plan(const Objective& obj, double epsilon) {
  return inexact_gradient_plan(obj.mu, obj.L, epsilon);
}

/// Exact line search along directions at angle theta; the factor is
/// ((k-1)/(k+1))^2 with k = (L/mu)(1+sin)/(1-sin). `h` and `hbar` carry the
/// fixed-step comparison value for ||d|| = c ||g||.
inline StepPlan exact_line_search_plan(double mu, double L, Angle theta, double c = 1.0) {
  StepPlan p = gradient_related_plan(mu, L, theta, c);
  p.method = Method::ExactLineSearch;
  p.predicted_factor = optimal_contraction(p.kappa);
  return p;
}

inline StepPlan exact_line_search_plan(const Objective& obj, Angle theta, double c = 1.0) {
  return exact_line_search_plan(obj.mu, obj.L, theta, c);
}

inline Vector gradient_step(const Objective& obj, const Vector& x, double h) {
  if (!(h >= 0.0)) throw InvalidArgument("gradient_step: h must be >= 0");
  return axpy_neg(x, h, obj.gradient(x));
}

inline Vector variable_metric_step(const Objective& obj, const Vector& x, const SpdMatrix& metric,
                                   double h) {
  if (!(h >= 0.0)) throw InvalidArgument("variable_metric_step: h must be >= 0");
  return axpy_neg(x, h, solve_spd(metric, obj.gradient(x)));
}

/// x - h d
inline Vector direction_step(const Vector& x, const Vector& d, double h) {
  if (!(h >= 0.0)) throw InvalidArgument("direction_step: h must be >= 0");
  return axpy_neg(x, h, d);
}

struct LineSearchStep {
  Vector x_plus;
  double h_star;
};

/// Minimizes f(x - h d) over h for a quadratic f: h* = <grad f(x), d>/<d, Qd>.
inline LineSearchStep exact_line_search_step(const Objective& obj, const Vector& x, const Vector& d) {
  if (!obj.quadratic) throw InvalidArgument("exact_line_search_step: objective is not quadratic");
  if (d.squared_norm() == 0.0) throw InvalidArgument("exact_line_search_step: d must be nonzero");
  const double h = inner(obj.gradient(x), d) / weighted_inner(d, d, obj.quadratic->Q);
  return {axpy_neg(x, h, d), h};
}

enum class Provenance { ExactGradient, MetricPreconditioned, AngleScaled, Perturbed };

struct DirectionSpec {
  Vector d;
  Provenance provenance;
};

/// d at angle theta to g with ||d|| = c ||g||.
struct AngleScaledRequest {
  Angle theta;
  double c;
};
/// d = g + e, ||e|| = eps_hat ||g||, e in a seeded random direction.
struct PerturbedRequest {
  double eps_hat;
};
/// d = g + e with e = eps ||g|| R g/||g||, R the quarter turn in the plane of
/// the first two coordinates (R = I when n = 1).
struct AdversarialRequest {
  double eps;
};

using DirectionRequest = std::variant<AngleScaledRequest, PerturbedRequest, AdversarialRequest>;

inline DirectionSpec sample_direction(const Vector& g, const DirectionRequest& request,
                                      std::uint64_t seed) {
  const double gnorm = g.norm();
  if (gnorm == 0.0) throw InvalidArgument("sample_direction: gradient is zero");
  const std::size_t n = g.size();
  const Vector ghat = g / gnorm;

  if (const auto* a = std::get_if<AngleScaledRequest>(&request)) {
    if (!(a->c > 0.0)) throw InvalidArgument("sample_direction: c must be > 0");
    if (a->theta.sin() == 0.0) return {a->c * g, Provenance::AngleScaled};
    if (n == 1) throw InvalidArgument("sample_direction: no orthogonal direction in dimension 1");
    Rng rng(seed);
    Vector z = random_unit_vector(n, rng);
    for (;;) {
      for (int pass = 0; pass < 2; ++pass) z = axpy_neg(z, inner(ghat, z), ghat);
      if (z.norm() > 1e-8) break;
      z = random_unit_vector(n, rng);
    }
    z = z.normalized();
    const Vector dhat = a->theta.cos() * ghat + a->theta.sin() * z;
    return {(a->c * gnorm) * dhat, Provenance::AngleScaled};
  }
  if (const auto* p = std::get_if<PerturbedRequest>(&request)) {
    if (!(p->eps_hat >= 0.0)) throw InvalidArgument("sample_direction: eps_hat must be >= 0");
    if (p->eps_hat == 0.0) return {g, Provenance::Perturbed};
    Rng rng(seed);
    const Vector e = (p->eps_hat * gnorm) * random_unit_vector(n, rng);
    return {g + e, Provenance::Perturbed};
  }
  const auto& adv = std::get<AdversarialRequest>(request);
  if (!(adv.eps >= 0.0)) throw InvalidArgument("sample_direction: eps must be >= 0");
  std::vector<double> rotated(ghat.values());
  if (n >= 2) {
    rotated[0] = -ghat[1];
    rotated[1] = ghat[0];
  }
  return {g + (adv.eps * gnorm) * Vector(std::move(rotated)), Provenance::Perturbed};
}

}  // namespace fixstep
