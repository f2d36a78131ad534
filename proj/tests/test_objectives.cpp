#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fixstep/certification.hpp"
#include "fixstep/descent.hpp"
#include "fixstep/objectives.hpp"

using namespace fixstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Objective> sample_objectives() {
  Rng rng(21);
  std::vector<Objective> out;
  out.push_back(make_half_squared_norm(3));
  out.push_back(make_worstcase_quadratic(1.0, 10.0, 5));
  out.push_back(make_random_quadratic(0.5, 40.0, 6, rng));
  out.push_back(make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 4));
  out.push_back(make_smooth_nonquadratic(SmoothKind::LogCoshRegularized, 3, {0.2, 5, 7, {}}));
  return out;
}

}  // namespace

TEST_CASE("make_quadratic constants and minimizer") {
  const auto id = make_quadratic({SpdMatrix::identity(2), Vector::zeros(2)});
  CHECK(id.mu == 1.0);
  CHECK(id.L == 1.0);
  CHECK(id.minimizer == Vector::zeros(2));
  CHECK(id.value(Vector{3, 4}) == 12.5);

  const auto d = make_quadratic({SpdMatrix::diagonal(Vector{1, 3}), Vector::zeros(2)});
  CHECK(d.mu == 1.0);
  CHECK(d.L == 3.0);
  CHECK(d.kappa() == 3.0);

  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto q = random_spd(n, 0.2, 50.0, rng);
    const auto obj = make_quadratic({q, random_normal_vector(n, rng)});
    CHECK(obj.gradient(obj.minimizer).norm() <= 1e-10 * std::max(1.0, obj.L));
    CHECK_THAT(obj.min_value, WithinAbs(obj.value(obj.minimizer), 0.0));
  }

  CHECK_THROWS_AS(make_quadratic({SpdMatrix::identity(2), Vector::zeros(3)}), DimensionMismatch);
}

TEST_CASE("make_worstcase_quadratic") {
  const auto a = make_worstcase_quadratic(1.0, 3.0, 2);
  CHECK(a.quadratic->Q.matrix() == Matrix::diagonal(Vector{1, 3}));
  CHECK(*a.witness == Vector{1, 1});

  const auto b = make_worstcase_quadratic(1.0, 10.0, 5);
  CHECK(b.mu == 1.0);
  CHECK(b.L == 10.0);
  CHECK(*b.witness == Vector{1, 0, 0, 0, 1});
  CHECK(b.quadratic->Q(2, 2) == 5.5);

  // one gradient step from the witness: x+ = (0.5, -0.5), gaps 2 -> 0.5
  const Vector x_plus = gradient_step(a, *a.witness, 0.5);
  CHECK(x_plus == Vector{0.5, -0.5});
  CHECK_THAT(a.gap(x_plus) / a.gap(*a.witness), WithinAbs(0.25, 1e-12));

  for (double L : {2.0, 10.0, 123.0}) {
    const auto w = make_worstcase_quadratic(1.0, L, 4);
    const double k = L;
    const double expected = ((k - 1) / (k + 1)) * ((k - 1) / (k + 1));
    const Vector xp = gradient_step(w, *w.witness, 2.0 / (L + 1.0));
    CHECK_THAT(w.gap(xp) / w.gap(*w.witness), WithinAbs(expected, 1e-12));
  }

  CHECK_THROWS_AS(make_worstcase_quadratic(0.0, 1.0, 2), InvalidArgument);
  CHECK_THROWS_AS(make_worstcase_quadratic(2.0, 1.0, 2), InvalidArgument);
  CHECK_THROWS_AS(make_worstcase_quadratic(1.0, 2.0, 1), InvalidArgument);
}

TEST_CASE("smooth non-quadratic objective") {
  SECTION("degenerate single term reduces to mu/2 x^2") {
    SmoothParams p;
    p.mu = 2.0;
    p.directions = {Vector{0.0}};
    const auto obj = make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 1, p);
    CHECK(obj.mu == 2.0);
    CHECK(obj.L == 2.0);
    CHECK(obj.minimizer == Vector{0.0});
    CHECK_THAT(obj.value(Vector{1.5}) - obj.min_value, WithinRel(0.5 * 2.0 * 2.25, 1e-14));
  }

  SECTION("constants follow the curvature bound of the scalar term") {
    SmoothParams p;
    p.directions = {Vector{2.0, 0.0}, Vector{0.0, 1.0}};
    const auto sp = make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 2, p);
    CHECK_THAT(sp.L, WithinRel(1.0 + 0.25 * 4.0, 1e-14));
    const auto lc = make_smooth_nonquadratic(SmoothKind::LogCoshRegularized, 2, p);
    CHECK_THAT(lc.L, WithinRel(1.0 + 4.0, 1e-14));
    // log cosh is even, so the minimizer is 0
    CHECK(lc.minimizer.norm() <= 1e-13);
  }

  SECTION("minimizer is stationary") {
    const auto obj = make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 6, {0.3, 8, 99, {}});
    CHECK(obj.gradient(obj.minimizer).norm() <= 1e-13);
    CHECK(obj.gap_slack == 1e-12);
  }

  CHECK_THROWS_AS(make_smooth_nonquadratic(static_cast<SmoothKind>(99), 2), InvalidArgument);
  CHECK_THROWS_AS(make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 0), InvalidArgument);
}

TEST_CASE("sandwich inequality at random points") {
  Rng rng(31);
  for (const auto& obj : sample_objectives()) {
    INFO(obj.name);
    for (int i = 0; i < 100; ++i) {
      const Vector x = obj.minimizer + uniform(rng, 0.01, 3.0) * random_normal_vector(obj.dim, rng);
      const double r2 = (x - obj.minimizer).squared_norm();
      const double gap = obj.gap(x);
      const double slack = 1e-12 + obj.gap_slack;
      CHECK(gap >= 0.5 * obj.mu * r2 * (1 - 1e-10) - slack);
      CHECK(gap <= 0.5 * obj.L * r2 * (1 + 1e-10) + slack);
    }
  }
}

TEST_CASE("co-coercivity of gradients") {
  Rng rng(37);
  for (const auto& obj : sample_objectives()) {
    INFO(obj.name);
    for (int i = 0; i < 100; ++i) {
      const Vector x = 2.0 * random_normal_vector(obj.dim, rng);
      const Vector y = 2.0 * random_normal_vector(obj.dim, rng);
      const double lhs = inner(obj.gradient(x) - obj.gradient(y), x - y);
      const double d2 = (x - y).squared_norm();
      CHECK(lhs >= obj.mu * d2 * (1 - 1e-9));
      CHECK(lhs <= obj.L * d2 * (1 + 1e-9));
    }
  }
}

TEST_CASE("preconditioning with the Hessian converges in one step") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto q = random_spd(n, 1.0, 30.0, rng);
    const auto obj = make_quadratic({q, random_normal_vector(n, rng)});
    const Vector x = random_normal_vector(n, rng);
    const Vector x_plus = variable_metric_step(obj, x, q, 1.0);
    CHECK((x_plus - obj.minimizer).norm() <= 1e-10 * std::max(1.0, obj.minimizer.norm()));
  }
}

TEST_CASE("gradient steps on non-quadratic objectives respect (1 - h mu)^2") {
  const auto obj = make_smooth_nonquadratic(SmoothKind::SoftplusRegularized, 5, {0.5, 6, 17, {}});
  const auto plan = gradient_plan(obj);
  CHECK_THAT(plan.predicted_factor, WithinRel(std::pow(1 - plan.h * obj.mu, 2), 1e-15));
  const auto report = certify_run(obj, plan, obj.minimizer + Vector(5, 2.0), 40, 42);
  CHECK(report.passed);
  CHECK(report.count(Verdict::Fail) == 0);
}
