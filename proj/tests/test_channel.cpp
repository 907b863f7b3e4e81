#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mpc/channel.hpp"
#include "mpc/errors.hpp"
#include "mpc/oracles.hpp"

using namespace mpc;

namespace {
const ChannelSpec kUnit = ChannelSpec::make(1.0, 1.0);
const ChannelSpec kThree = ChannelSpec::make(1.0, 3.0);
}  // namespace

TEST_CASE("channel and shell construction") {
  CHECK_THROWS_AS(ChannelSpec::make(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ChannelSpec::make(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(ChannelSpec::make(INFINITY, 1.0), DomainError);
  const ShellSpec s = ShellSpec::make(40, 1.7);
  CHECK(s.radius * s.radius == doctest::Approx(40 * 1.7).epsilon(1e-15));
  CHECK_THROWS_AS(ShellSpec::make(0, 1.0), DomainError);
}

TEST_CASE("capacity, derivative and dispersion closed forms") {
  CHECK(capacity(kUnit) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(capacity(kThree) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(capacity(ChannelSpec::make(1.0, 1e-12)) < 1e-12);
  CHECK(capacity_derivative(kUnit) == 0.25);
  CHECK(capacity_derivative(kThree) == 0.125);
  CHECK(dispersion(kUnit) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(dispersion(kThree) == doctest::Approx(15.0 / 32.0).epsilon(1e-15));
  CHECK(dispersion(ChannelSpec::make(1.0, 1e-9)) < 1e-8);

  for (double g : {0.1, 0.5, 1.0, 4.0, 20.0}) {
    const ChannelSpec ch = ChannelSpec::make(0.7, g);
    const double h = 1e-5;
    const double fd = (capacity(ChannelSpec::make(0.7, g + h)) - capacity(ChannelSpec::make(0.7, g - h))) / (2 * h);
    CHECK(std::abs(fd - capacity_derivative(ch)) <= 1e-8);
    CHECK(dispersion(ch) > 0.0);
    CHECK(dispersion(ch) < 0.5);
    CHECK(capacity(ChannelSpec::make(0.7, g * 1.01)) > capacity(ch));
  }
}

TEST_CASE("nu_x integrates to the dispersion under N(0, Γ)") {
  CHECK(nu_x(kUnit, 0.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(nu_x(kUnit, 1.0) == doctest::Approx(dispersion(kUnit)).epsilon(1e-15));
  CHECK(nu_x(kUnit, -2.3) == nu_x(kUnit, 2.3));
  const oracle::Quadrature gh = oracle::gauss_hermite(40);
  for (const ChannelSpec& ch : {kUnit, kThree, ChannelSpec::make(2.5, 0.4)}) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      acc += gh.weights[i] * nu_x(ch, std::sqrt(2.0 * ch.cost_threshold) * gh.nodes[i]);
    }
    CHECK(std::abs(acc / std::sqrt(std::numbers::pi) - dispersion(ch)) <= 1e-10);
  }
}

TEST_CASE("the two forms of the limiting Φ argument agree") {
  for (const ChannelSpec& ch : {kUnit, kThree, ChannelSpec::make(0.3, 2.0)}) {
    const double g = ch.cost_threshold, nv = ch.noise_variance;
    for (double r : {-1.0, 0.0, 0.7}) {
      for (double u : {-3.0, 0.0, 2.5}) {
        const double a = r / std::sqrt(dispersion(ch)) - capacity_derivative(ch) * u / std::sqrt(dispersion(ch));
        const double b = std::sqrt(2.0) * (nv + g) * r / std::sqrt(g * g + 2 * nv * g) -
                         u / (std::sqrt(2.0) * std::sqrt(g * g + 2 * nv * g));
        CHECK(std::abs(a - b) <= 1e-12);
      }
    }
  }
}

TEST_CASE("phi_n_gamma") {
  CHECK(phi_n_gamma(kUnit, 100, capacity(kUnit), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi_n_gamma(kUnit, 100, -50.0, 1.0) < 1e-12);
  // Independent re-derivation of the argument.
  const double n = 100.0, g = 1.0, nv = 1.0, s = 1.2;
  const double gamma = std::log(2.0) / 2 + 0.1 / std::sqrt(10.0);
  const double root = std::sqrt(g * g + 2.0 * nv * s);
  const double arg = std::sqrt(2.0 * n) * (nv + g) * (gamma - 0.5 * std::log(1.0 + g / nv)) / root +
                     std::sqrt(n) * (g - s) / (std::sqrt(2.0) * root);
  CHECK(std::abs(phi_n_gamma_argument(kUnit, 100, gamma, s) - arg) <= 1e-12);
  CHECK(std::abs(phi_n_gamma(kUnit, 100, gamma, s) - oracle::normal_cdf_reference(arg)) <= 1e-12);
  CHECK_THROWS_AS(phi_n_gamma(kUnit, 100, gamma, -0.1), DomainError);
}

TEST_CASE("log density ratio sampler") {
  const std::int64_t n = 10000;
  const int draws = 20000;
  RngStream rng(5, 0);
  double acc = 0.0, acc2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = log_density_ratio_sample(kUnit, n, 1.0, rng);
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / draws;
  const double sd = std::sqrt(acc2 / draws - mean * mean);
  const double dn = static_cast<double>(n);
  const double expected = dn * capacity(kUnit) + dn / 2.0 - 0.25 * dn * 2.0;
  CHECK(std::abs(mean - expected) <= 4.0 * sd / std::sqrt(draws));

  // s = 0: no noncentrality, so nC − χ²_n/4 never exceeds nC.
  RngStream r0(6, 0);
  for (int i = 0; i < 100; ++i) CHECK(log_density_ratio_sample(kUnit, 64, 0.0, r0) <= 64 * capacity(kUnit));

  const std::size_t m = 20000;
  std::vector<double> reduced;
  RngStream r1(11, 0);
  for (std::size_t i = 0; i < m; ++i) reduced.push_back(log_density_ratio_sample(kUnit, 16, 1.3, r1));
  const std::vector<double> direct = oracle::direct_log_ratio_samples(kUnit, 16, 1.3, m, 12);
  CHECK(oracle::ks_statistic(reduced, direct) < oracle::ks_critical_99(m, m));
}

TEST_CASE("shell output density") {
  for (std::int64_t n : {10, 50, 200}) CHECK(std::abs(oracle::qcc_radial_mass(kUnit, n, 1.0) - 1.0) <= 1e-4);
  CHECK(std::abs(oracle::qcc_radial_mass(ChannelSpec::make(0.5, 2.0), 50, 1.3) - 1.0) <= 1e-4);

  // n = 2 against direct averaging of the Gaussian kernel around the circle.
  const ShellSpec planar = ShellSpec::make(2, 1.5);
  for (double y : {0.2, 1.0, 1.7, 3.0, 5.0}) {
    const double ref = std::log(oracle::qcc_planar_convolution(kUnit, planar.radius, y));
    CHECK(std::abs(qcc_log_density(planar, kUnit, y) - ref) <= 1e-9);
  }

  // E||Y||² = nΓ_j + nN through the radial density.
  const std::int64_t n = 50;
  const ShellSpec shell = ShellSpec::make(n, 1.4);
  const double log_area = std::log(2.0) + 25.0 * std::log(std::numbers::pi) - std::lgamma(25.0);
  double mass = 0.0, second = 0.0;
  const double h = 1e-3;
  for (double rho = h / 2; rho < 20.0; rho += h) {
    const double w = std::exp(qcc_log_density(shell, kUnit, rho) + log_area + 49.0 * std::log(rho)) * h;
    mass += w;
    second += w * rho * rho;
  }
  CHECK(std::abs(second / mass - 50.0 * (1.4 + 1.0)) <= 1e-6 * 120.0);

  CHECK_THROWS_AS(qcc_log_density(ShellSpec::make(1, 1.0), kUnit, 1.0), DomainError);
  CHECK_THROWS_AS(qcc_log_density(shell, kUnit, 0.0), DomainError);
}

TEST_CASE("mu, s_star and F") {
  CHECK(s_star(kUnit, 0.0) == 3.0);
  CHECK(s_star(ChannelSpec::make(1.0, 2.0), 0.0) == 5.0);
  CHECK(std::abs(mu_s_eps(kUnit, s_star(kUnit, 0.0), 0.0)) <= 1e-14);

  // Regrouped expression with Γ' = Γ + ε.
  auto mu_ref = [](double g, double nv, double s, double eps) {
    const double gp = g + eps;
    return s - 1.0 - g / nv - (nv * gp / (4.0 * g * (gp + nv))) * (s * s - 1.0) - std::log((1.0 + s) / 2.0) +
           std::log((gp + nv) / nv);
  };
  CHECK(std::abs(mu_s_eps(kUnit, 2.5, 0.01) - mu_ref(1.0, 1.0, 2.5, 0.01)) <= 1e-12);

  for (double eps : {-0.2, -0.05, 0.0, 0.03, 0.3}) {
    const double star = s_star(kUnit, eps);
    const double top = mu_s_eps(kUnit, star, eps);
    CHECK(std::abs(top - big_f(kUnit, eps)) <= 1e-12);
    for (double s = 1.05; s < 8.0; s += 0.05) CHECK(mu_s_eps(kUnit, s, eps) <= top + 1e-14);
    CHECK(mu_s_eps(kUnit, star + 0.5, eps) < mu_s_eps(kUnit, star + 0.1, eps));
  }
  CHECK_THROWS_AS(mu_s_eps(kUnit, 1.0, 0.0), DomainError);

  CHECK(big_f(kUnit, 0.0) == 0.0);
  CHECK(std::abs(big_f(kUnit, 0.1) - (-0.1 / 1.1 + std::log(1.1))) <= 1e-15);
  // Taylor remainder: the quartic coefficient of F is 3/4, so |ε|⁴ suffices for |ε| <= 0.1.
  for (double eps : {-0.1, -0.03, 0.01, 0.05, 0.1}) {
    const double taylor = eps * eps / 2.0 - 2.0 * eps * eps * eps / 3.0;
    CHECK(std::abs(big_f(kUnit, eps) - taylor) <= std::pow(eps, 4));
  }
  CHECK(big_f(kUnit, -0.05) > 0.0);
  CHECK_THROWS_AS(big_f(kUnit, -1.0), DomainError);
}

TEST_CASE("log ratio check stays O(1)") {
  std::vector<double> residuals;
  for (std::int64_t n : {50, 100, 200, 400}) {
    const double eps = 1.0 / std::sqrt(static_cast<double>(n));
    const double delta = 0.5 * (kUnit.cost_threshold + kUnit.noise_variance);
    const auto grid = log_ratio_grid(kUnit, n, eps, delta, 101);
    const LogRatioReport rep = qcc_qstar_log_ratio_check(kUnit, n, eps, delta, grid);
    CHECK(std::isfinite(rep.max_residual));
    residuals.push_back(rep.max_residual);
  }
  const auto [lo, hi] = std::minmax_element(residuals.begin(), residuals.end());
  CHECK(*hi - *lo <= 1.0);

  const double centre = std::sqrt(100.0 * (1.0 + 0.1 + 1.0));
  const std::vector<double> mid{centre};
  CHECK(std::isfinite(qcc_qstar_log_ratio_check(kUnit, 100, 0.1, 0.5, mid).max_residual));
  const std::vector<double> outside{centre * 2.0};
  CHECK_THROWS_AS(qcc_qstar_log_ratio_check(kUnit, 100, 0.1, 0.5, outside), DomainError);
  CHECK_THROWS_AS(qcc_qstar_log_ratio_check(kUnit, 100, 0.1, 2.0, mid), DomainError);
}
