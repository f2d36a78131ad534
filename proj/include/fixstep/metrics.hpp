#pragma once

// SPD metrics A with A d = g built from a direction d and a gradient g.
//
//   sr1_metric        B = (1/alpha)(I - r r^T / <r,u>), r = u - alpha v,
//                     alpha = cos/(1+sin); maps unit u to unit v with the
//                     smallest possible condition number (1+sin)/(1-sin).
//   reflection_metric A^{-1} = I + rho Q with Q a Householder reflection,
//                     rho = ||d-g||/||g||; eigenvalues 1/(1 +- rho).

#include <cmath>
#include <cstdint>
#include <limits>

#include "fixstep/linalg.hpp"
#include "fixstep/random.hpp"

namespace fixstep {

/// Smallest admissible cos(theta); below it metrics and steps degenerate.
inline constexpr double kCosFloor = 1e-8;

/// Angle in [0, pi/2] stored as an accurate (cos, sin) pair.
class Angle {
 public:
  static Angle from_radians(double theta) {
    if (!(theta >= 0.0) || !(theta <= std::acos(0.0))) {
      throw InvalidArgument("angle must lie in [0, pi/2]");
    }
    return Angle(std::cos(theta), std::sin(theta));
  }

  static Angle from_degrees(double degrees) {
    return from_radians(degrees * std::acos(-1.0) / 180.0);
  }

  static Angle from_cos(double cos_theta) {
    if (!(cos_theta >= 0.0) || !(cos_theta <= 1.0)) {
      throw InvalidArgument("cos(theta) must lie in [0, 1]");
    }
    return Angle(cos_theta, std::sqrt((1.0 - cos_theta) * (1.0 + cos_theta)));
  }

  double cos() const noexcept { return cos_; }
  double sin() const noexcept { return sin_; }
  double radians() const noexcept { return std::atan2(sin_, cos_); }
  double degrees() const noexcept { return radians() * 180.0 / std::acos(-1.0); }

  /// (1 + sin)/(1 - sin), written as (1+sin)^2/cos^2 to stay accurate near pi/2.
  double condition_factor() const noexcept {
    const double q = (1.0 + sin_) / cos_;
    return q * q;
  }

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  Angle(double c, double s) : cos_(c), sin_(s) {}
  double cos_;
  double sin_;
};

inline void require_cos_floor(double cos_theta, const char* who) {
  if (!(cos_theta >= kCosFloor)) {
    throw InvalidArgument(std::string(who) + ": cos(theta) below floor 1e-8");
  }
}

/// Unit pair (u, v) with <u, v> = cos(theta) > 0.
struct AngleWitness {
  Vector u;
  Vector v;
  double cos_theta;
  double sin_theta;
  double alpha;  // (1 - sin)/cos = cos/(1 + sin)

  /// Builds the witness from two nonzero vectors, normalizing both. sin(theta)
  /// is taken as the norm of the component of v orthogonal to u.
  static AngleWitness from_pair(const Vector& u_raw, const Vector& v_raw) {
    detail::require_same_size(u_raw.size(), v_raw.size(), "AngleWitness");
    const Vector u = u_raw.normalized();
    const Vector v = v_raw.normalized();
    const double c = std::min(1.0, inner(u, v));
    if (!(c > 0.0)) throw InvalidArgument("AngleWitness: <u, v> must be positive");
    const double s = std::min(1.0, axpy_neg(v, c, u).norm());
    return AngleWitness{u, v, c, s, c / (1.0 + s)};
  }

  /// Witness with a caller-supplied cos(theta); it must match <u, v> to 1e-12.
  static AngleWitness with_cos(const Vector& u, const Vector& v, double cos_theta) {
    detail::require_same_size(u.size(), v.size(), "AngleWitness");
    if (std::abs(u.norm() - 1.0) > 1e-12 || std::abs(v.norm() - 1.0) > 1e-12) {
      throw InvalidArgument("AngleWitness: u and v must be unit vectors");
    }
    if (!(cos_theta > 0.0) || cos_theta > 1.0) {
      throw InvalidArgument("AngleWitness: cos(theta) must lie in (0, 1]");
    }
    if (std::abs(inner(u, v) - cos_theta) > 1e-12) {
      throw InvalidArgument("AngleWitness: <u, v> disagrees with cos(theta)");
    }
    const Angle a = Angle::from_cos(cos_theta);
    return AngleWitness{u, v, a.cos(), a.sin(), a.cos() / (1.0 + a.sin())};
  }
};

struct MetricResult {
  SpdMatrix A;
  double lambda_min;  // analytic
  double lambda_max;  // analytic
  double kappa;
};

/// Symmetric rank-one metric B with B u = v.
///
/// Spectrum: cos/(1+sin) once (along r) and cos/(1-sin) with multiplicity
/// n-1. theta = 0 returns the identity.
inline MetricResult sr1_metric(const AngleWitness& w) {
  require_cos_floor(w.cos_theta, "sr1_metric");
  const std::size_t n = w.u.size();
  const double c = w.cos_theta;
  const double s = w.sin_theta;

  // theta = 0 up to rounding in sin
  if (s < 1e-15) {
    if ((w.u - w.v).norm() > 1e-12) throw InvalidArgument("sr1_metric: theta = 0 but u != v");
    return {SpdMatrix::identity(n), 1.0, 1.0, 1.0};
  }

  const double alpha = c / (1.0 + s);
  // 1 - alpha and r = (u - v) + (1 - alpha) v, both free of cancellation
  const double one_minus_alpha = (s + s * s / (1.0 + c)) / (1.0 + s);
  const Vector r = (w.u - w.v) + one_minus_alpha * w.v;
  // <r, u> = 1 - alpha cos = sin
  const Matrix b = (1.0 / alpha) * rank_one_update(Matrix::identity(n), r, -1.0 / s);
  const double lmin = alpha;
  const double lmax = (1.0 + s) / c;
  return {SpdMatrix(b), lmin, lmax, lmax / lmin};
}

/// Pieces of the reflection construction, exposed for verification.
struct ReflectionParts {
  double rho;        // ||d - g|| / ||g||
  int orientation;   // +1: Q g^ = (d-g)^, A^{-1} = I + rho Q;  -1: Q g^ = -(d-g)^, A^{-1} = I - rho Q
  Matrix reflection;
  Matrix inverse;    // A^{-1}
  Matrix metric;     // A = (I - orientation rho Q) / (1 - rho^2)
};

/// Builds A with A d = g from the reflection that carries g/||g|| onto
/// (d-g)/||d-g||. When the two unit vectors nearly coincide the Householder
/// vector is ill-conditioned; there the reflection onto -(d-g)/||d-g|| is
/// used with the sign of rho flipped, which gives the same spectrum.
///
/// rho <= 1e-14 yields identity parts.
inline ReflectionParts reflection_parts(const Vector& d, const Vector& g) {
  detail::require_same_size(d.size(), g.size(), "reflection_metric");
  const std::size_t n = g.size();
  const double gnorm = g.norm();
  if (gnorm == 0.0) throw InvalidArgument("reflection_metric: g must be nonzero");
  const Vector e = d - g;
  const double enorm = e.norm();
  const double rho = enorm / gnorm;
  if (rho >= 1.0 - 1e-10) throw InvalidArgument("reflection_metric: need ||d - g|| < ||g||");
  if (rho <= 1e-14) {
    return {rho, 1, Matrix::identity(n), Matrix::identity(n), Matrix::identity(n)};
  }

  const Vector ghat = g / gnorm;
  const Vector ehat = e / enorm;
  int orientation = 1;
  Vector w = ghat - ehat;
  if (w.norm() < 1e-4) {
    orientation = -1;
    w = ghat + ehat;
  }
  const Matrix q = rank_one_update(Matrix::identity(n), w, -2.0 / w.squared_norm());
  const double srho = orientation * rho;
  Matrix inv(n), a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      inv(i, j) = delta + srho * q(i, j);
      a(i, j) = (delta - srho * q(i, j)) / ((1.0 - rho) * (1.0 + rho));
    }
  return {rho, orientation, q, inv, a};
}

/// SPD A with A d = g and eigenvalues 1/(1 +- rho), rho = ||d-g||/||g|| < 1.
inline MetricResult reflection_metric(const Vector& d, const Vector& g) {
  auto parts = reflection_parts(d, g);
  const double rho = parts.rho <= 1e-14 ? 0.0 : parts.rho;
  const double lmin = 1.0 / (1.0 + rho);
  const double lmax = 1.0 / (1.0 - rho);
  return {SpdMatrix(std::move(parts.metric)), lmin, lmax, (1.0 + rho) / (1.0 - rho)};
}

/// A = (||g||/||d||) B with B the SR1 metric mapping d/||d|| to g/||g||, so
/// that A d = g.
inline MetricResult gradient_related_metric(const Vector& g, const Vector& d) {
  const auto w = AngleWitness::from_pair(d, g);
  const auto b = sr1_metric(w);
  const double scale = g.norm() / d.norm();
  return {SpdMatrix(scale * b.A.matrix()), scale * b.lambda_min, scale * b.lambda_max, b.kappa};
}

/// cos(theta) = sigma * c for <g, d> = sigma ||d||^2 and ||d|| = c ||g||.
inline double sigma_to_angle(double sigma, double c) {
  if (!(sigma > 0.0) || !(c > 0.0)) throw InvalidArgument("sigma_to_angle: need sigma, c > 0");
  const double cos_theta = sigma * c;
  if (cos_theta > 1.0 + 1e-12) throw InvalidArgument("sigma_to_angle: sigma * c exceeds 1");
  return std::min(cos_theta, 1.0);
}

struct MinConditionResult {
  double best_kappa_found;
  double analytic_min;       // (1+sin)/(1-sin)
  double best_t;             // lower-right entry of the best B found
  double sr1_kappa;          // eigensolver condition number of the SR1 metric
  std::size_t points_scanned;
};

/// Condition number of the symmetric 2x2 matrix [[a, b], [b, d]], given its
/// determinant separately to avoid cancellation.
inline double kappa_2x2(double a, double b, double d, double det) {
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  const double lmax = mean + radius;
  const double lmin = det / lmax;
  return lmax / lmin;
}

/// Brute-force search for the smallest condition number of a 2x2 SPD B with
/// B u = v, u = (1, 0), v = (cos, sin).
///
/// Symmetry and B u = v force B = [[cos, sin], [sin, t]], SPD iff
/// t > sin^2/cos. The free parameter t = sin^2/cos + tau is scanned on a
/// log grid tau in [1e-12, 1e12] of `grid_points` points plus `trials`
/// log-uniform random draws.
inline MinConditionResult min_condition_oracle(double cos_theta, std::size_t trials,
                                               std::uint64_t seed,
                                               std::size_t grid_points = 100000) {
  if (!(cos_theta > 0.0) || cos_theta > 1.0) {
    throw InvalidArgument("min_condition_oracle: cos(theta) must lie in (0, 1]");
  }
  require_cos_floor(cos_theta, "min_condition_oracle");
  if (trials < 1) throw InvalidArgument("min_condition_oracle: trials must be >= 1");

  const Angle angle = Angle::from_cos(cos_theta);
  const double c = angle.cos();
  const double s = angle.sin();
  const double t0 = s * s / c;

  double best = std::numeric_limits<double>::infinity();
  double best_t = t0;
  auto probe = [&](double log10_tau) {
    const double tau = std::pow(10.0, log10_tau);
    const double t = t0 + tau;
    const double k = kappa_2x2(c, s, t, c * tau);
    if (k < best) {
      best = k;
      best_t = t;
    }
  };
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double frac = grid_points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(grid_points - 1);
    probe(-12.0 + 24.0 * frac);
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < trials; ++i) probe(uniform(rng, -12.0, 12.0));

  const auto sr1 = sr1_metric(AngleWitness::with_cos(Vector{1.0, 0.0}, Vector{c, s}, c));
  const auto eig = symmetric_eigen(sr1.A.matrix());
  return {best, angle.condition_factor(), best_t, eig.values.back() / eig.values.front(),
          grid_points + trials};
}

}  // namespace fixstep
