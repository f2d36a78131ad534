#pragma once

// Per-step certification of the contraction bounds, step-size sweeps and
// tightness witnesses.
//
// Seeds: a master seed m yields the random start of trial t from
// derive_seed(m, t, 0) and the direction sample of step k (or grid point k)
// from derive_seed(m, t, k + 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fixstep/descent.hpp"
#include "fixstep/linalg.hpp"
#include "fixstep/metrics.hpp"
#include "fixstep/objectives.hpp"
#include "fixstep/random.hpp"

namespace fixstep {

enum class Verdict { Pass, Fail, Converged, Uncertified };

constexpr std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Converged: return "Converged";
    case Verdict::Uncertified: return "Uncertified";
  }
  return "Unknown";
}

struct StepCertificate {
  std::size_t iter;
  double h;
  double gap_before;
  double gap_after;
  double observed_ratio;
  double bound;
  std::optional<double> data_dependent_bound;
  double slack_used;
  Verdict verdict;
};

struct SweepPoint {
  double h;
  double bound;
  double worst_ratio;
  std::size_t failures;
};

struct RunReport {
  std::string config_digest;
  std::uint64_t master_seed = kDefaultSeed;
  std::string method;
  double mu = 0.0;
  double L = 0.0;
  double kappa = 0.0;
  double hbar = 0.0;
  double bound_at_hbar = 0.0;
  std::vector<StepCertificate> certificates;
  double worst_ratio = 0.0;
  double worst_ratio_over_bound = 0.0;
  std::optional<double> tightness_gap;
  std::vector<SweepPoint> sweep;
  bool passed = true;

  std::size_t count(Verdict v) const {
    return static_cast<std::size_t>(std::count_if(certificates.begin(), certificates.end(),
                                                  [v](const auto& c) { return c.verdict == v; }));
  }
};

struct CertifyOptions {
  // ratio <= bound * (1 + rtol) + atol
  Tolerance slack{1e-12, 1e-9};
  // gap_before at or below this is reported as Converged
  double gap_floor = 1e-28;
  // inexact method: use the deterministic sharp perturbation instead of random ones
  bool adversarial_inexact = false;
  bool allow_uncertified = false;
};

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string describe(const Objective& obj, const StepPlan& plan, std::uint64_t seed) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s|%s|mu=%.17g|L=%.17g|h=%.17g|hbar=%.17g|seed=%llu",
                obj.name.c_str(), std::string(method_name(plan.method)).c_str(), plan.mu, plan.L,
                plan.h, plan.hbar, static_cast<unsigned long long>(seed));
  return buf;
}

inline RunReport report_for(const Objective& obj, const StepPlan& plan, std::uint64_t seed) {
  RunReport r;
  r.config_digest = fnv1a_hex(describe(obj, plan, seed));
  r.master_seed = seed;
  r.method = std::string(method_name(plan.method));
  r.mu = plan.mu;
  r.L = plan.L;
  r.kappa = plan.kappa;
  r.hbar = plan.hbar;
  r.bound_at_hbar = plan.bound_at_hbar();
  return r;
}

inline void check_dimensions(const Objective& obj, const StepPlan& plan, const Vector& x0) {
  detail::require_same_size(obj.dim, x0.size(), "start point");
  if (const auto* vm = std::get_if<VariableMetricParams>(&plan.params)) {
    detail::require_same_size(obj.dim, vm->metric.size(), "plan metric");
  }
}

struct DirectionChoice {
  Vector d;
  double h;
  std::optional<double> rho;  // relative error of d, inexact method only
};

inline DirectionChoice choose_direction(const Objective& obj, const StepPlan& plan, const Vector& x,
                                        const Vector& g, std::uint64_t seed,
                                        const CertifyOptions& opts) {
  switch (plan.method) {
    case Method::Gradient: return {g, plan.h, std::nullopt};
    case Method::VariableMetric:
      return {solve_spd(std::get<VariableMetricParams>(plan.params).metric, g), plan.h, std::nullopt};
    case Method::GradientRelated: {
      const auto& p = std::get<AngleScalingParams>(plan.params);
      return {sample_direction(g, AngleScaledRequest{p.theta, p.c}, seed).d, plan.h, std::nullopt};
    }
    case Method::GradientRelatedRelaxed: {
      const auto& p = std::get<RelaxedAngleParams>(plan.params);
      Rng rng(seed);
      const Angle theta = Angle::from_radians(uniform(rng, 0.0, p.theta_prime.radians()));
      const double c = p.c1 == p.c2 ? p.c1 : uniform(rng, p.c1, p.c2);
      return {sample_direction(g, AngleScaledRequest{theta, c}, splitmix64(seed)).d, plan.h,
              std::nullopt};
    }
    case Method::InexactGradient: {
      const double eps = std::get<InexactParams>(plan.params).epsilon;
      DirectionRequest req = AdversarialRequest{eps};
      if (!opts.adversarial_inexact) {
        Rng rng(seed);
        req = PerturbedRequest{eps == 0.0 ? 0.0 : uniform(rng, 0.0, eps)};
      }
      Vector d = sample_direction(g, req, splitmix64(seed)).d;
      const double rho = (d - g).norm() / g.norm();
      return {std::move(d), plan.h, rho};
    }
    case Method::ExactLineSearch: {
      const auto& p = std::get<AngleScalingParams>(plan.params);
      Vector d = sample_direction(g, AngleScaledRequest{p.theta, p.c}, seed).d;
      const double h = exact_line_search_step(obj, x, d).h_star;
      return {std::move(d), h, std::nullopt};
    }
  }
  throw InvalidArgument("unknown method");
}

// Rounding error of the gap ratio caused by storing x and x+ in absolute
// coordinates: each displacement from x* carries an error of a few ulps of
// the largest coordinate scale, which matters once ||x - x*|| << ||x*||.
inline double rounding_slack(const Objective& obj, const Vector& x, const Vector& x_plus,
                             double ratio, double gap_before) {
  const double scale = std::max({x.norm(), x_plus.norm(), obj.minimizer.norm()});
  const double e = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  const double err_before = obj.L * ((x - obj.minimizer).norm() * e + e * e);
  const double err_after = obj.L * ((x_plus - obj.minimizer).norm() * e + e * e);
  return (err_after + ratio * err_before) / gap_before;
}

inline bool within(double ratio, double bound, double extra, const Tolerance& tol) {
  return ratio <= bound * (1.0 + tol.rtol) + tol.atol + extra;
}

inline void finalize(RunReport& r, const Tolerance& tol) {
  r.worst_ratio = 0.0;
  r.worst_ratio_over_bound = 0.0;
  r.passed = true;
  for (const auto& c : r.certificates) {
    if (c.verdict == Verdict::Fail || c.verdict == Verdict::Uncertified) r.passed = false;
    if (c.verdict == Verdict::Converged) continue;
    r.worst_ratio = std::max(r.worst_ratio, c.observed_ratio);
    double margin = 0.0;
    if (c.bound > 0.0) {
      margin = c.observed_ratio / c.bound;
    } else if (c.observed_ratio > tol.atol) {
      margin = std::numeric_limits<double>::infinity();
    }
    r.worst_ratio_over_bound = std::max(r.worst_ratio_over_bound, margin);
  }
}

}  // namespace detail

/// Takes one step of `plan` from x and certifies the observed gap ratio.
/// Returns the certificate and the new iterate.
inline std::pair<StepCertificate, Vector> certify_step(const Objective& obj, const StepPlan& plan,
                                                       const Vector& x, std::size_t iter,
                                                       std::uint64_t seed,
                                                       const CertifyOptions& opts = {}) {
  const double gap_before = obj.gap(x);
  if (gap_before <= opts.gap_floor) {
    return {StepCertificate{iter, plan.h, gap_before, gap_before, 0.0, plan.predicted_factor,
                            std::nullopt, 0.0, Verdict::Converged},
            x};
  }
  const Vector g = obj.gradient(x);
  auto choice = detail::choose_direction(obj, plan, x, g, seed, opts);
  Vector x_plus = direction_step(x, choice.d, choice.h);

  const double gap_after = obj.gap(x_plus);
  const double ratio = gap_after / gap_before;
  const double bound = plan.factor_at(choice.h);
  const double extra = obj.gap_slack / gap_before +
                      detail::rounding_slack(obj, x, x_plus, ratio, gap_before);

  StepCertificate cert{iter,  choice.h, gap_before,   gap_after,     ratio,
                       bound, std::nullopt, bound * opts.slack.rtol + opts.slack.atol + extra,
                       Verdict::Pass};
  bool ok = detail::within(ratio, bound, extra, opts.slack);
  if (choice.rho) {
    const double data = plan.data_factor_at(choice.h, *choice.rho);
    cert.data_dependent_bound = data;
    ok = ok && detail::within(ratio, data, extra, opts.slack);
  }
  const bool certified = plan.method == Method::ExactLineSearch || plan.certifies(choice.h);
  cert.verdict = !certified ? Verdict::Uncertified : (ok ? Verdict::Pass : Verdict::Fail);
  return {cert, std::move(x_plus)};
}

/// Runs `iters` steps from x0 and certifies each one. Directions of the
/// randomized methods are drawn from derive_seed(seed, trial, k + 1).
inline RunReport certify_run(const Objective& obj, const StepPlan& plan, const Vector& x0,
                             std::size_t iters, std::uint64_t seed, const CertifyOptions& opts = {},
                             std::size_t trial = 0) {
  detail::check_dimensions(obj, plan, x0);
  if (iters < 1) throw InvalidArgument("certify_run: iters must be >= 1");
  if (!plan.certified() && !opts.allow_uncertified) {
    throw InvalidArgument("certify_run: step size exceeds the certified limit");
  }
  RunReport report = detail::report_for(obj, plan, seed);
  Vector x = x0;
  for (std::size_t k = 0; k < iters; ++k) {
    auto [cert, next] = certify_step(obj, plan, x, k, derive_seed(seed, trial, k + 1), opts);
    report.certificates.push_back(cert);
    x = std::move(next);
  }
  detail::finalize(report, opts.slack);
  return report;
}

/// Random start for trial `trial`: x* plus a standard normal offset.
inline Vector random_start(const Objective& obj, std::uint64_t seed, std::size_t trial) {
  Rng rng(derive_seed(seed, trial, 0));
  return obj.minimizer + random_normal_vector(obj.dim, rng);
}

/// `trials` independent runs of `iters` steps from random starts; the
/// certificates are concatenated in trial order.
inline RunReport certify_trials(const Objective& obj, const StepPlan& plan, std::size_t iters,
                                std::size_t trials, std::uint64_t seed,
                                const CertifyOptions& opts = {}) {
  if (trials < 1) throw InvalidArgument("certify_trials: trials must be >= 1");
  RunReport report = detail::report_for(obj, plan, seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto run = certify_run(obj, plan, random_start(obj, seed, t), iters, seed, opts, t);
    report.certificates.insert(report.certificates.end(), run.certificates.begin(),
                               run.certificates.end());
  }
  detail::finalize(report, opts.slack);
  return report;
}

/// Default sweep grid: `points` values on [0, hbar], both ends included. For
/// the gradient method a third of the points go strictly inside
/// (2/(L+mu), 2/L) to exercise the (hL-1)^2 branch.
inline std::vector<double> default_step_grid(const StepPlan& plan, std::size_t points) {
  if (points < 2) throw InvalidArgument("sweep: grid_points must be >= 2");
  if (plan.method != Method::Gradient) return linspace(0.0, plan.hbar, points);
  const std::size_t extended = points / 3;
  auto grid = linspace(0.0, plan.hbar, points - extended);
  const double hi = 2.0 / plan.L;
  for (std::size_t j = 1; j <= extended; ++j) {
    grid.push_back(plan.hbar + (hi - plan.hbar) * static_cast<double>(j) /
                                   static_cast<double>(extended + 1));
  }
  return grid;
}

/// Certifies one step from each of `trials` random starts at every h in
/// `grid`. Certificates are ordered by (h, trial); `iter` holds the trial.
inline RunReport sweep_step_sizes(const Objective& obj, const StepPlan& plan,
                                  std::span<const double> grid, std::size_t trials,
                                  std::uint64_t seed, const CertifyOptions& opts = {}) {
  if (trials < 1) throw InvalidArgument("sweep: trials must be >= 1");
  if (grid.empty()) throw InvalidArgument("sweep: empty grid");
  std::vector<Vector> starts;
  starts.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) starts.push_back(random_start(obj, seed, t));
  detail::check_dimensions(obj, plan, starts.front());

  RunReport report = detail::report_for(obj, plan, seed);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const StepPlan p = opts.allow_uncertified ? plan.with_uncertified_step(grid[k]) : plan.with_step(grid[k]);
    SweepPoint point{grid[k], p.predicted_factor, 0.0, 0};
    for (std::size_t t = 0; t < trials; ++t) {
      auto cert = certify_step(obj, p, starts[t], t, derive_seed(seed, t, k + 1), opts).first;
      if (cert.verdict != Verdict::Converged) point.worst_ratio = std::max(point.worst_ratio, cert.observed_ratio);
      if (cert.verdict == Verdict::Fail) ++point.failures;
      report.certificates.push_back(cert);
    }
    report.sweep.push_back(point);
  }
  detail::finalize(report, opts.slack);
  return report;
}

inline RunReport sweep_step_sizes(const Objective& obj, const StepPlan& plan, std::size_t grid_points,
                                  std::size_t trials, std::uint64_t seed,
                                  const CertifyOptions& opts = {}) {
  const auto grid = default_step_grid(plan, grid_points);
  return sweep_step_sizes(obj, plan, std::span<const double>(grid), trials, seed, opts);
}

enum class Witness { GradientWitness, VariableMetricWitness, InexactSharp, AngleExactLS };

constexpr std::string_view witness_name(Witness w) noexcept {
  switch (w) {
    case Witness::GradientWitness: return "gradient";
    case Witness::VariableMetricWitness: return "variable-metric";
    case Witness::InexactSharp: return "inexact";
    case Witness::AngleExactLS: return "angle-exact-ls";
  }
  return "unknown";
}

struct TightnessParams {
  double mu = 1.0;
  double L = 3.0;
  std::size_t dim = 2;                    // gradient witness dimension
  std::vector<double> metric_diag{1.0, 2.0};
  double epsilon = 0.5;
  double theta_degrees = 30.0;
  std::size_t steps = 1;
  std::uint64_t seed = kDefaultSeed;
};

/// Witness start (1, 0, ..., 0, 1).
inline Vector corner_witness(std::size_t n) {
  std::vector<double> w(n, 0.0);
  w.front() = 1.0;
  w.back() = 1.0;
  return Vector(std::move(w));
}

/// Runs a witness instance on which the bound is attained and records
/// tightness_gap = max |observed - bound|. Passes when the gap is <= 1e-10.
inline RunReport tightness_suite(Witness which, const TightnessParams& params = {}) {
  CertifyOptions opts;
  RunReport report;
  switch (which) {
    case Witness::GradientWitness: {
      const auto obj = make_worstcase_quadratic(params.mu, params.L, params.dim);
      report = certify_run(obj, gradient_plan(obj), *obj.witness, params.steps, params.seed, opts);
      break;
    }
    case Witness::VariableMetricWitness: {
      const auto n = params.metric_diag.size();
      const auto obj = make_half_squared_norm(n);
      const auto plan = variable_metric_plan(obj, SpdMatrix::diagonal(Vector(params.metric_diag)));
      report = certify_run(obj, plan, corner_witness(n), params.steps, params.seed, opts);
      break;
    }
    case Witness::InexactSharp: {
      const auto obj = make_half_squared_norm(2);
      opts.adversarial_inexact = true;
      report = certify_run(obj, inexact_gradient_plan(obj, params.epsilon), corner_witness(2),
                           params.steps, params.seed, opts);
      break;
    }
    case Witness::AngleExactLS: {
      const auto obj = make_half_squared_norm(2);
      const auto plan = exact_line_search_plan(obj, Angle::from_degrees(params.theta_degrees));
      report = certify_run(obj, plan, corner_witness(2), params.steps, params.seed, opts);
      break;
    }
  }
  double gap = 0.0;
  for (const auto& c : report.certificates) {
    if (c.verdict != Verdict::Converged) gap = std::max(gap, std::abs(c.observed_ratio - c.bound));
  }
  report.tightness_gap = gap;
  report.passed = report.passed && gap <= 1e-10;
  return report;
}

enum class SpectrumEnd { Min, Max };

/// One variable-metric step at hbar from x* + v, v the unit eigenvector of A
/// for its smallest or largest eigenvalue, on an isotropic quadratic
/// (Q = q I). The step attains the bound; the verdict is Pass when
/// |observed - bound| <= 1e-10.
inline StepCertificate eigenvector_equality_check(const Objective& obj, const SpdMatrix& metric,
                                                  SpectrumEnd which) {
  if (!obj.quadratic) throw InvalidArgument("eigenvector_equality_check: objective is not quadratic");
  const auto& q = obj.quadratic->Q;
  if (std::abs(q.lambda_max() - q.lambda_min()) > 1e-14 * q.lambda_max()) {
    throw InvalidArgument("eigenvector_equality_check: needs an isotropic quadratic");
  }
  const auto eig = symmetric_eigen(metric.matrix());
  const Vector v = eig.vector(which == SpectrumEnd::Min ? 0 : eig.values.size() - 1);
  const StepPlan plan = variable_metric_plan(obj, metric);
  auto cert = certify_step(obj, plan, obj.minimizer + v, 0, kDefaultSeed).first;
  if (cert.verdict != Verdict::Converged) {
    cert.verdict = std::abs(cert.observed_ratio - cert.bound) <= 1e-10 ? Verdict::Pass : Verdict::Fail;
  }
  return cert;
}

}  // namespace fixstep
