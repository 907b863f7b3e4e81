#include <doctest.h>

#include <cmath>

#include "mpc/constraints.hpp"
#include "mpc/errors.hpp"

using namespace mpc;

namespace {
ConstraintSet square(double budget) { return ConstraintSet(1.0, {{ConstraintFunction::square(), budget}}); }
}  // namespace

TEST_CASE("constraint functions evaluate per kind") {
  CHECK(evaluate(ConstraintFunction::positive_part(), -3.0) == 0.0);
  CHECK(evaluate(ConstraintFunction::positive_part(), 2.5) == 2.5);
  CHECK(evaluate(ConstraintFunction::square(), 2.0) == 4.0);
  CHECK(evaluate(ConstraintFunction::one_sided_square(), -2.0) == 0.0);
  CHECK(evaluate(ConstraintFunction::one_sided_square(), 3.0) == 9.0);
  CHECK(evaluate(ConstraintFunction::smoothed_step(1.0, 0.5), 3.0) == 2.0);
  CHECK(evaluate(ConstraintFunction::smoothed_step(1.0, 0.5), 1.0) == 0.0);
  CHECK(evaluate(ConstraintFunction::step_indicator(1.0), 1.0) == 0.0);
  CHECK(evaluate(ConstraintFunction::step_indicator(1.0), 1.0 + 1e-12) == 1.0);
  CHECK(evaluate(ConstraintFunction::power_law(3.0), -2.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(ConstraintFunction::power_law(0.5), DomainError);
  CHECK_THROWS_AS(ConstraintFunction::smoothed_step(1.0, 0.0), DomainError);
}

TEST_CASE("nonnegativity and lower semicontinuity on a grid") {
  const ConstraintFunction all[] = {ConstraintFunction::positive_part(),  ConstraintFunction::square(),
                                    ConstraintFunction::one_sided_square(), ConstraintFunction::step_indicator(0.5),
                                    ConstraintFunction::smoothed_step(0.5, 2.0), ConstraintFunction::power_law(1.5)};
  for (const auto& f : all) {
    for (int i = -40; i <= 40; ++i) {
      const double u = i / 8.0;
      CHECK(f(u) >= 0.0);
      // f(u) <= liminf along u ± h as h shrinks.
      const double liminf = std::min({f(u + 1e-10), f(u - 1e-10), f(u + 1e-12), f(u - 1e-12)});
      CHECK(f(u) <= liminf + 1e-8);
    }
  }
}

TEST_CASE("upward divergence flags") {
  CHECK_FALSE(ConstraintFunction::step_indicator(1.0).diverges_upward());
  CHECK(ConstraintFunction::smoothed_step(1.0, 0.1).diverges_upward());
  CHECK(ConstraintFunction::square().diverges_upward());
  CHECK(ConstraintFunction::one_sided_square().diverges_upward());
  CHECK(ConstraintFunction::positive_part().diverges_upward());
  CHECK(ConstraintFunction::power_law(2.0).diverges_upward());

  CHECK_FALSE(ConstraintSet(1.0, {{ConstraintFunction::step_indicator(1.0), 0.1}}).condition2_holds());
  CHECK(ConstraintSet(1.0, {{ConstraintFunction::step_indicator(1.0), 0.1}, {ConstraintFunction::square(), 1.0}})
            .condition2_holds());
  CHECK_THROWS_AS(ConstraintSet(0.0, {}), DomainError);
  CHECK_THROWS_AS(square(-0.1), DomainError);
}

TEST_CASE("membership in the scaled set") {
  const ConstraintSet cs = square(1.0);
  CHECK(check_membership_U(DiscreteDistribution::point_mass(0.0), cs));
  CHECK_FALSE(check_membership_U(DiscreteDistribution::point_mass(1.0), cs));
  CHECK(check_membership_U({{-1.0, 1.0}, {0.5, 0.5}}, cs));
  CHECK_FALSE(check_membership_U({{-1.1, 1.1}, {0.5, 0.5}}, cs));

  const ConstraintSet maximal(1.0, {{ConstraintFunction::positive_part(), 0.0}});
  CHECK(check_membership_U({{-3.0, 0.0}, {0.2, 0.8}}, maximal));
  CHECK_FALSE(check_membership_U({{-3.0, 1e-6}, {0.2, 0.8}}, maximal));
  CHECK(check_membership_U({{-3.0, 1e-10}, {0.2, 0.8}}, maximal));
}

TEST_CASE("membership is monotone in budgets") {
  const DiscreteDistribution p{{-2.0, 0.5, 1.5}, {0.35, 0.35, 0.3}};
  bool seen = false;
  for (double b = 0.0; b <= 3.0; b += 0.05) {
    const bool in = check_membership_U(p, square(b));
    CHECK((in || !seen));
    seen = seen || in;
  }
  CHECK(seen);
}

TEST_CASE("membership in the per-letter cost set") {
  const ConstraintSet cs = square(1.0);
  const std::int64_t n = 100;
  CHECK(check_membership_S(DiscreteDistribution::point_mass(1.0), cs, n));
  CHECK_FALSE(check_membership_S({{-0.1, 1.1}, {0.5, 0.5}}, cs, n));
  const DiscreteDistribution u{{-1.0, 1.0}, {0.5, 0.5}};
  REQUIRE(check_membership_U(u, cs));
  DiscreteDistribution s = u;
  for (double& a : s.atoms) a = 1.0 + a / std::sqrt(static_cast<double>(n));
  CHECK(check_membership_S(s, cs, n));
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(DiscreteDistribution({{0.0, 1.0}, {0.25, 0.75}}).validate(2));
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 1.0}, {0.25, 0.7}}).validate(), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 1.0}, {-0.25, 1.25}}).validate(), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0}, {0.5, 0.5}}).validate(), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 1.0, 2.0}, {0.2, 0.3, 0.5}}).validate(2), DomainError);
}

TEST_CASE("support bounds") {
  CHECK(support_bound(square(1.0), 1e-4) == doctest::Approx(100.0).epsilon(1e-12));
  const double gc = 1.0, alpha = 0.01, delta = 0.1, floor = 1e-4;
  const ConstraintSet step(1.0, {{ConstraintFunction::smoothed_step(gc, alpha), delta}});
  CHECK(support_bound(step, floor) == doctest::Approx(gc + (delta / floor - 1.0) / alpha).epsilon(1e-12));
  const ConstraintSet maximal(1.0, {{ConstraintFunction::positive_part(), 0.0}});
  CHECK(support_bound(maximal, 1e-6) == 0.0);
  CHECK_THROWS_AS(support_bound(ConstraintSet(1.0, {{ConstraintFunction::step_indicator(1.0), 0.1}}), 1e-4),
                  UnboundedSupportError);
  CHECK(lower_support_bound(square(1.0), 1e-4) == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(std::isinf(lower_support_bound(maximal, 1e-4)));
}
