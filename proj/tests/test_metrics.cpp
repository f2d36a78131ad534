#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fixstep/metrics.hpp"
#include "fixstep/random.hpp"

using namespace fixstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Random unit pair with <u, v> = cos_theta exactly up to rounding.
std::pair<Vector, Vector> unit_pair(std::size_t n, double cos_theta, Rng& rng) {
  const Vector u = random_unit_vector(n, rng);
  Vector z = random_normal_vector(n, rng);
  z = axpy_neg(z, inner(u, z), u);
  z = axpy_neg(z, inner(u, z), u).normalized();
  const double s = std::sqrt((1 - cos_theta) * (1 + cos_theta));
  return {u, cos_theta * u + s * z};
}

}  // namespace

TEST_CASE("Angle keeps an accurate sin/cos pair") {
  const auto a = Angle::from_degrees(30.0);
  CHECK_THAT(a.cos(), WithinAbs(std::sqrt(3.0) / 2, 1e-16));
  CHECK_THAT(a.sin(), WithinAbs(0.5, 1e-16));
  CHECK_THAT(a.condition_factor(), WithinRel(3.0, 1e-15));
  CHECK(Angle::from_cos(1.0).sin() == 0.0);
  CHECK_THROWS_AS(Angle::from_cos(1.5), InvalidArgument);
  CHECK_THROWS_AS(Angle::from_degrees(-1.0), InvalidArgument);
}

TEST_CASE("AngleWitness invariants") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto u = random_normal_vector(n, rng);
    auto v = random_normal_vector(n, rng);
    if (inner(u, v) <= 0) v = -v;
    const auto w = AngleWitness::from_pair(u, v);
    CHECK_THAT(w.u.norm(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(w.v.norm(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(inner(w.u, w.v), WithinAbs(w.cos_theta, 1e-12));
    CHECK(w.cos_theta > 0.0);
    CHECK(w.alpha > 0.0);
    CHECK(w.alpha <= 1.0);
    CHECK_THAT(w.alpha * w.alpha, WithinAbs((1 - w.sin_theta) / (1 + w.sin_theta), 1e-12));
  }
  CHECK_THROWS_AS(AngleWitness::from_pair(Vector{1, 0}, Vector{-1, 1}), InvalidArgument);
  CHECK_THROWS_AS(AngleWitness::with_cos(Vector{1, 0}, Vector{0.6, 0.8}, 0.5), InvalidArgument);
}

TEST_CASE("sr1_metric: theta = 0 is the identity") {
  const Vector u = Vector{1, 2, 2} / 3.0;
  const auto m = sr1_metric(AngleWitness::from_pair(u, u));
  CHECK(m.A.matrix() == Matrix::identity(3));
  CHECK(m.kappa == 1.0);

  // cos = 1 claimed, but u != v
  const Vector v = Vector{1.0, 1e-6, 0.0}.normalized();
  const auto bad = AngleWitness{Vector{1, 0, 0}, v, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS(sr1_metric(bad), InvalidArgument);
}

TEST_CASE("sr1_metric: 30 degrees in the plane") {
  const Vector u{1, 0};
  const Vector v{std::cos(30 * kDeg), std::sin(30 * kDeg)};
  const auto m = sr1_metric(AngleWitness::from_pair(u, v));
  const auto eig = symmetric_eigen(m.A.matrix());
  // (sqrt3/2)/(3/2) and (sqrt3/2)/(1/2)
  CHECK_THAT(eig.values[0], WithinRel(std::sqrt(3.0) / 3.0, 1e-12));
  CHECK_THAT(eig.values[1], WithinRel(std::sqrt(3.0), 1e-12));
  CHECK_THAT(m.lambda_min, WithinRel(0.5773502691896258, 1e-14));
  CHECK_THAT(m.lambda_max, WithinRel(1.7320508075688772, 1e-14));
  CHECK((m.A * u - v).norm() <= 1e-14);
  CHECK_THAT(m.kappa, WithinRel(3.0, 1e-14));
}

TEST_CASE("sr1_metric spectrum and multiplicities on random witnesses") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const double c = trial < 100 ? uniform(rng, 0.05, 1.0) : uniform(rng, 1e-3, 0.05);
    const auto [u, v] = unit_pair(n, c, rng);
    const auto w = AngleWitness::from_pair(u, v);
    const auto m = sr1_metric(w);
    INFO("n=" << n << " cos=" << c);

    CHECK(m.A.matrix().is_symmetric());
    CHECK((m.A * w.u - w.v).norm() <= 1e-10);
    CHECK_THAT(m.lambda_min, WithinRel(w.cos_theta / (1 + w.sin_theta), 1e-13));
    CHECK_THAT(m.lambda_max, WithinRel(w.cos_theta / (1 - w.sin_theta), 1e-9));

    const auto eig = symmetric_eigen(m.A.matrix());
    const double scale = m.lambda_max;
    CHECK(std::abs(eig.values[0] - m.lambda_min) <= 1e-12 + 1e-10 * scale);
    for (std::size_t k = 1; k < n; ++k) {
      CHECK(std::abs(eig.values[k] - m.lambda_max) <= 1e-12 + 1e-10 * scale);
    }
    // the small eigenvalue lives along r = u - alpha v
    const Vector r = w.u - w.alpha * w.v;
    CHECK((m.A * r - m.lambda_min * r).norm() <= 1e-10 * scale * r.norm());
    if (c > 0.05) CHECK_THAT(eig.values.back() / eig.values.front(), WithinRel(m.kappa, 1e-10));
  }
}

TEST_CASE("sr1_metric rejects angles past the cos floor") {
  const auto [u, v] = [] {
    Rng rng(1);
    return unit_pair(3, 5e-9, rng);
  }();
  CHECK_THROWS_AS(sr1_metric(AngleWitness::from_pair(u, v)), InvalidArgument);
}

TEST_CASE("monotonicity of the SR1 extreme eigenvalues in theta") {
  double prev_min = 2.0, prev_max = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto a = Angle::from_radians(i * (std::numbers::pi / 2) / 500.0);
    const double lmin = a.cos() / (1 + a.sin());
    const double lmax = (1 + a.sin()) / a.cos();
    CHECK(lmin < prev_min);
    CHECK(lmax > prev_max);
    prev_min = lmin;
    prev_max = lmax;
  }
}

TEST_CASE("reflection_metric") {
  SECTION("d = g gives the identity") {
    const Vector g{0.3, -2.0, 1.0};
    const auto m = reflection_metric(g, g);
    CHECK(m.A.matrix() == Matrix::identity(3));
    CHECK(m.kappa == 1.0);
  }

  SECTION("planar example rho = 0.5") {
    const Vector g{1, 0};
    const Vector d{1, 0.5};
    const auto parts = reflection_parts(d, g);
    CHECK(parts.rho == 0.5);
    const auto m = reflection_metric(d, g);
    const auto eig = symmetric_eigen(m.A.matrix());
    CHECK_THAT(eig.values[0], WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(eig.values[1], WithinRel(2.0, 1e-14));
    CHECK((m.A * d - g).norm() <= 1e-14);
    // A^{-1} g = d through an independent solve, and inverse * A = I
    CHECK((solve_spd(m.A, g) - d).norm() <= 1e-14);
    CHECK((parts.inverse * g - d).norm() <= 1e-14);
    const Matrix prod = parts.inverse * m.A.matrix();
    CHECK((prod - Matrix::identity(2)).frobenius_norm() <= 1e-14);
  }

  SECTION("reflection sends g/||g|| to (d-g)/||d-g||") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 8;
      const Vector g = random_normal_vector(n, rng);
      const double rho = uniform(rng, 0.0, 0.99);
      const Vector d = g + (rho * g.norm()) * random_unit_vector(n, rng);
      const auto parts = reflection_parts(d, g);
      const Vector ghat = g.normalized();
      const Vector ehat = (d - g).normalized();
      CHECK((parts.reflection * ghat - parts.orientation * ehat).norm() <= 1e-11);
      CHECK((parts.reflection * parts.reflection - Matrix::identity(n)).frobenius_norm() <= 1e-13);
      CHECK((parts.inverse * g - d).norm() <= 1e-12 * g.norm());
    }
  }

  SECTION("nearly parallel perturbation switches orientation") {
    const Vector g{1, 0, 0};
    const Vector d{1.5, 1e-9, 0};
    const auto parts = reflection_parts(d, g);
    CHECK(parts.orientation == -1);
    const auto m = reflection_metric(d, g);
    CHECK((m.A * d - g).norm() <= 1e-14);
    const auto eig = symmetric_eigen(m.A.matrix());
    CHECK_THAT(eig.values.front(), WithinRel(1.0 / 1.5, 1e-12));
    CHECK_THAT(eig.values.back(), WithinRel(1.0 / 0.5, 1e-12));
  }

  SECTION("one dimension") {
    const auto m = reflection_metric(Vector{1.3}, Vector{1.0});
    CHECK_THAT(m.A(0, 0) * 1.3, WithinRel(1.0, 1e-15));
  }

  SECTION("random rho = 0.9 gives kappa 19") {
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + trial % 6;
      const Vector g = random_normal_vector(n, rng);
      const Vector d = g + (0.9 * g.norm()) * random_unit_vector(n, rng);
      const auto m = reflection_metric(d, g);
      const auto eig = symmetric_eigen(m.A.matrix());
      CHECK_THAT(eig.values.back() / eig.values.front(), WithinRel(19.0, 1e-9));
      CHECK_THAT(m.kappa, WithinRel(19.0, 1e-12));
    }
  }

  CHECK_THROWS_AS(reflection_metric(Vector{1, 1}, Vector{0, 0}), InvalidArgument);
  CHECK_THROWS_AS(reflection_metric(Vector{2.5, 0}, Vector{1, 0}), InvalidArgument);
  CHECK_THROWS_AS(reflection_metric(Vector{2, 0}, Vector{1, 0}), InvalidArgument);
}

TEST_CASE("gradient_related_metric maps d to g") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const Vector g = random_normal_vector(n, rng);
    Vector d = random_normal_vector(n, rng);
    if (inner(g, d) <= 0) d = -d;
    const auto m = gradient_related_metric(g, d);
    CHECK((m.A * d - g).norm() <= 1e-10 * g.norm());
    CHECK_THAT(m.A.lambda_min(), WithinRel(m.lambda_min, 1e-9));
    CHECK_THAT(m.A.lambda_max(), WithinRel(m.lambda_max, 1e-9));
  }
}

TEST_CASE("sigma_to_angle") {
  CHECK(sigma_to_angle(1.0, 1.0) == 1.0);
  CHECK(sigma_to_angle(0.5, 1.0) == 0.5);
  CHECK_THROWS_AS(sigma_to_angle(2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(sigma_to_angle(0.0, 1.0), InvalidArgument);

  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Vector g = random_normal_vector(n, rng);
    Vector d = random_normal_vector(n, rng);
    if (inner(g, d) <= 0) d = -d;
    const double sigma = inner(g, d) / d.squared_norm();
    const double c = d.norm() / g.norm();
    CHECK_THAT(sigma_to_angle(sigma, c), WithinAbs(inner(g, d) / (g.norm() * d.norm()), 1e-14));
  }
}

TEST_CASE("min_condition_oracle") {
  SECTION("theta = 0") {
    const auto r = min_condition_oracle(1.0, 100, 42);
    CHECK(r.analytic_min == 1.0);
    CHECK(r.sr1_kappa == 1.0);
    CHECK(r.best_kappa_found >= 1.0 - 1e-12);
  }

  for (double deg : {30.0, 60.0}) {
    DYNAMIC_SECTION("theta = " << deg) {
      const auto a = Angle::from_degrees(deg);
      const auto r = min_condition_oracle(a.cos(), 1000, 42);
      const double expected = (1 + std::sin(deg * kDeg)) / (1 - std::sin(deg * kDeg));
      CHECK_THAT(r.analytic_min, WithinRel(expected, 1e-12));
      CHECK(r.points_scanned >= 100000);
      CHECK(r.best_kappa_found >= r.analytic_min - 1e-8);
      // the scan is fine enough to come close to the optimum
      CHECK(r.best_kappa_found <= r.analytic_min * (1 + 1e-5));
      CHECK_THAT(r.sr1_kappa, WithinRel(r.analytic_min, 1e-10));
    }
  }

  CHECK_THAT(min_condition_oracle(Angle::from_degrees(30).cos(), 10, 1).analytic_min,
             WithinRel(3.0, 1e-14));
  CHECK_THAT(min_condition_oracle(Angle::from_degrees(60).cos(), 10, 1).analytic_min,
             WithinRel(13.928203230275509, 1e-12));
  CHECK_THROWS_AS(min_condition_oracle(0.0, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(min_condition_oracle(1.2, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(min_condition_oracle(0.5, 0, 1), InvalidArgument);
}
