#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mpc/errors.hpp"
#include "mpc/optimizer.hpp"
#include "mpc/oracles.hpp"

using namespace mpc;

namespace {

const ChannelSpec kUnit = ChannelSpec::make(1.0, 1.0);

ConstraintSet maximal() { return ConstraintSet(1.0, {{ConstraintFunction::positive_part(), 0.0}}); }
ConstraintSet mean_variance(double v = 1.0) { return ConstraintSet(1.0, {{ConstraintFunction::square(), v}}); }

SearchOptions options() {
  SearchOptions o;
  o.seed = 17;
  return o;
}

double weight_at(const DiscreteDistribution& d, double atom) {
  double w = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::abs(d.atoms[j] - atom) <= 1e-8) w += d.weights[j];
  }
  return w;
}

}  // namespace

TEST_CASE("objective shapes") {
  const ObjectiveSpec a = ObjectiveSpec::asymptotic(0.3, 0.4);
  CHECK(a(0.0) == doctest::Approx(std_normal_cdf(0.3)).epsilon(1e-15));
  CHECK(a(2.0) == doctest::Approx(std_normal_cdf(0.3 - 0.8)).epsilon(1e-15));
  CHECK(std::isinf(a.lower_limit()));
  for (double u = -20.0; u < 20.0; u += 0.1) CHECK(std::abs(a(u + 0.1) - a(u)) <= 0.4 * 0.1 / std::sqrt(2 * std::numbers::pi) + 1e-15);

  const ObjectiveSpec f = ObjectiveSpec::finite_n(kUnit, 400, capacity(kUnit));
  CHECK(f(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.lower_limit() == doctest::Approx(-20.0));
  CHECK(f(3.0) == doctest::Approx(phi_n_gamma(kUnit, 400, capacity(kUnit), 1.0 + 3.0 / 20.0)).epsilon(1e-15));
}

TEST_CASE("maximal constraint reproduces the closed form with a point mass at zero") {
  const double sv = std::sqrt(dispersion(kUnit));
  for (double r : {-1.5, -0.4, 0.0, 0.9, 1.5}) {
    const OptimizerResult res = asymptotic_limit(kUnit, maximal(), r, options());
    CHECK(std::abs(res.value - oracle::normal_cdf_reference(r / sv)) <= 1e-6);
    CHECK(weight_at(res.distribution, 0.0) >= 1.0 - 1e-6);
    CHECK(res.status == OptimizerStatus::Converged);
  }
  CHECK(asymptotic_limit(kUnit, maximal(), 12.0, options()).value >= 1.0 - 1e-9);
}

TEST_CASE("large second-moment budgets drive the limit to zero") {
  double prev = 1.0;
  for (double v : {10.0, 100.0, 1000.0, 10000.0}) {
    const double val = asymptotic_limit(kUnit, mean_variance(v), 0.0, options()).value;
    CHECK(val < prev);
    prev = val;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("smoothed step approaches the excess-cost value") {
  const double target = 0.9 * oracle::normal_cdf_reference(-capacity_derivative(kUnit) / std::sqrt(dispersion(kUnit)));
  double prev_err = INFINITY;
  for (double alpha : {1e-1, 1e-2, 1e-3}) {
    const ConstraintSet cs(1.0, {{ConstraintFunction::smoothed_step(1.0, alpha), 0.1}});
    const double err = std::abs(asymptotic_limit(kUnit, cs, 0.0, options()).value - target);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err <= 5e-3);
}

TEST_CASE("mean-variance limit matches the reformulated problem and the dense grid") {
  const double sv = std::sqrt(dispersion(kUnit));
  const double cp = capacity_derivative(kUnit);
  for (double r : {-0.5, 0.0, 0.5}) {
    const double lim = asymptotic_limit(kUnit, mean_variance(), r, options()).value;
    CHECK(std::abs(lim - oracle::pi_reformulation_limit(r / sv, cp * cp / dispersion(kUnit))) <= 1e-4);
  }

  const double ub = support_bound(mean_variance(), 1e-2);
  std::vector<double> phi, u, sq;
  for (int i = 0; i < 2000; ++i) {
    const double x = -ub + 2.0 * ub * i / 1999.0;
    phi.push_back(oracle::normal_cdf_reference(-cp / sv * x));
    u.push_back(x);
    sq.push_back(x * x);
  }
  const double grid = oracle::grid_lp_dual(phi, {u, sq}, {0.0, 1.0}, {false, false});
  const OptimizerResult res = asymptotic_limit(kUnit, mean_variance(), 0.0, options());
  CHECK(std::abs(res.value - grid) <= 1e-3);
  // Sandwich between the dual bound and the returned value.
  CHECK(res.lower_bound <= res.value + 1e-12);
  CHECK(res.certificate_gap <= 5e-3);
}

TEST_CASE("returned laws are feasible with at most k+2 atoms") {
  const std::vector<ConstraintSet> sets{
      maximal(), mean_variance(),
      ConstraintSet(1.0, {{ConstraintFunction::one_sided_square(), 0.5}}),
      ConstraintSet(1.0, {{ConstraintFunction::power_law(3.0), 2.0}}),
      ConstraintSet(1.0, {{ConstraintFunction::square(), 2.0}, {ConstraintFunction::smoothed_step(0.5, 0.3), 0.2}}),
  };
  for (const auto& cs : sets) {
    for (double r : {-0.7, 0.3}) {
      const OptimizerResult res = asymptotic_limit(kUnit, cs, r, options());
      CHECK(res.distribution.size() <= cs.k() + 2);
      CHECK(check_membership_U(res.distribution, cs, 1e-8));
      CHECK(res.value >= 0.0);
      CHECK(res.value <= 1.0);
    }
  }
}

TEST_CASE("budget monotonicity, equality mean and restart stability") {
  double prev = 1.0;
  for (double v : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double val = asymptotic_limit(kUnit, mean_variance(v), 0.2, options()).value;
    CHECK(val <= prev + 1e-9);
    prev = val;
  }

  SearchOptions eq = options();
  eq.mean_mode = MeanMode::Equality;
  for (double r : {-0.5, 0.0, 0.5}) {
    CHECK(std::abs(asymptotic_limit(kUnit, mean_variance(), r, eq).value -
                   asymptotic_limit(kUnit, mean_variance(), r, options()).value) <= 1e-4);
  }

  std::vector<double> best;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SearchOptions o = options();
    o.seed = seed;
    best.push_back(asymptotic_limit(kUnit, mean_variance(), 0.0, o).value);
  }
  const auto [lo, hi] = std::minmax_element(best.begin(), best.end());
  CHECK(*hi - *lo <= 1e-4);
}

TEST_CASE("results do not depend on the thread count") {
  SearchOptions one = options(), four = options();
  four.threads = 4;
  const OptimizerResult a = asymptotic_limit(kUnit, mean_variance(), 0.3, one);
  const OptimizerResult b = asymptotic_limit(kUnit, mean_variance(), 0.3, four);
  CHECK(a.value == b.value);
  CHECK(a.distribution.atoms == b.distribution.atoms);
  CHECK(a.distribution.weights == b.distribution.weights);
}

TEST_CASE("step indicator alone is rejected") {
  const ConstraintSet cs(1.0, {{ConstraintFunction::step_indicator(1.0), 0.1}});
  CHECK_THROWS_AS(asymptotic_limit(kUnit, cs, 0.0, options()), UnboundedSupportError);
}

TEST_CASE("finite-n converse objective") {
  const std::int64_t n = 400;
  const double gamma = capacity(kUnit);
  const OptimizerResult mv = finite_n_converse_value(kUnit, mean_variance(), n, gamma, options());
  CHECK(mv.value <= phi_n_gamma(kUnit, n, gamma, 1.0) + 1e-12);
  CHECK(check_membership_S(mv.distribution, mean_variance(), n, 1e-8));
  CHECK(mv.distribution.size() <= 3);

  const OptimizerResult mx = finite_n_converse_value(kUnit, maximal(), n, gamma, options());
  for (double s : mx.distribution.atoms) {
    CHECK(s <= kUnit.cost_threshold + 1e-9);
    CHECK(s >= 0.0);
  }

  const double root_n = 20.0;
  std::vector<double> phi, u, sq;
  for (int i = 0; i < 4000; ++i) {
    const double x = -root_n + (40.0 + root_n) * i / 3999.0;
    phi.push_back(phi_n_gamma(kUnit, n, gamma, std::max(0.0, 1.0 + x / root_n)));
    u.push_back(x);
    sq.push_back(x * x);
  }
  CHECK(std::abs(mv.value - oracle::grid_lp_dual(phi, {u, sq}, {0.0, 1.0}, {false, false})) <= 1e-3);
}

TEST_CASE("Lipschitz audit") {
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(-1.5 + 0.1 * i);
  const LipschitzAuditReport mx = lipschitz_audit(kUnit, maximal(), grid, options());
  CHECK(mx.passed);
  CHECK(mx.max_ratio <= 1.0 / (std::sqrt(dispersion(kUnit)) * std::sqrt(2 * std::numbers::pi)) + 1e-6);

  std::vector<double> fine;
  for (int i = 0; i <= 20; ++i) fine.push_back(-0.5 + 0.05 * i);
  CHECK(lipschitz_audit(kUnit, mean_variance(), fine, options()).passed);

  const std::vector<double> saturated{12.0, 12.5, 13.0};
  CHECK(lipschitz_audit(kUnit, maximal(), saturated, options()).max_ratio <= 1e-8);
}
