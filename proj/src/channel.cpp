#include "mpc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mpc/errors.hpp"

namespace mpc {

ChannelSpec ChannelSpec::make(double noise_variance, double cost_threshold) {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw DomainError("noise_variance must be positive and finite");
  }
  if (!(cost_threshold > 0.0) || !std::isfinite(cost_threshold)) {
    throw DomainError("cost_threshold must be positive and finite");
  }
  return ChannelSpec{noise_variance, cost_threshold};
}

ShellSpec ShellSpec::make(std::int64_t blocklength, double shell_cost) {
  if (blocklength < 1) throw DomainError("shell blocklength must be positive");
  if (!(shell_cost > 0.0)) throw DomainError("shell cost must be positive");
  return ShellSpec{blocklength, shell_cost,
                   std::sqrt(static_cast<double>(blocklength) * shell_cost)};
}

double capacity(const ChannelSpec& ch) {
  return 0.5 * std::log1p(ch.cost_threshold / ch.noise_variance);
}

double capacity_derivative(const ChannelSpec& ch) {
  return 1.0 / (2.0 * (ch.cost_threshold + ch.noise_variance));
}

double dispersion(const ChannelSpec& ch) {
  const double g = ch.cost_threshold;
  const double n = ch.noise_variance;
  return (g * g + 2.0 * g * n) / (2.0 * (n + g) * (n + g));
}

double nu_x(const ChannelSpec& ch, double x) {
  const double g = ch.cost_threshold;
  const double n = ch.noise_variance;
  return (g * g + 2.0 * x * x * n) / (2.0 * (n + g) * (n + g));
}

double log_density_ratio_sample(const ChannelSpec& ch, std::int64_t n, double s, RngStream& rng) {
  if (n < 1) throw DomainError("log_density_ratio_sample: n must be positive");
  if (!(s >= 0.0)) throw DomainError("log_density_ratio_sample: s must be nonnegative");
  const double g = ch.cost_threshold;
  const double nv = ch.noise_variance;
  const double dn = static_cast<double>(n);
  const double lambda = dn * nv * s / (g * g);
  const double chi = sample_noncentral_chisq(static_cast<std::uint64_t>(n), lambda, rng);
  return dn * capacity(ch) + dn * s / (2.0 * g) - g / (2.0 * (nv + g)) * chi;
}

double phi_n_gamma_argument(const ChannelSpec& ch, std::int64_t n, double gamma, double s) {
  if (!(s >= 0.0)) throw DomainError("phi_n_gamma: s must be nonnegative");
  const double g = ch.cost_threshold;
  const double nv = ch.noise_variance;
  const double dn = static_cast<double>(n);
  const double root = std::sqrt(g * g + 2.0 * nv * s);
  return std::sqrt(2.0 * dn) * (nv + g) * (gamma - capacity(ch)) / root +
         std::sqrt(dn) * (g - s) / (std::numbers::sqrt2 * root);
}

double phi_n_gamma(const ChannelSpec& ch, std::int64_t n, double gamma, double s) {
  return std_normal_cdf(phi_n_gamma_argument(ch, n, gamma, s));
}

double qcc_log_density(const ShellSpec& shell, const ChannelSpec& ch, double y_norm) {
  if (shell.blocklength < 2) throw DomainError("qcc_log_density: blocklength must be >= 2");
  if (!(y_norm > 0.0)) throw DomainError("qcc_log_density: y_norm must be positive");
  const double n = static_cast<double>(shell.blocklength);
  const double nv = ch.noise_variance;
  const double radius = shell.radius;
  const double order = 0.5 * n - 1.0;
  const double arg = radius * y_norm / nv;
  return log_gamma(0.5 * n) - std::numbers::ln2 - 0.5 * n * std::log(std::numbers::pi * nv) -
         (radius * radius + y_norm * y_norm) / (2.0 * nv) + order * std::log(nv / (radius * y_norm)) +
         log_bessel_i(order, arg);
}

double gaussian_log_density(std::int64_t n, double variance, double y_norm) {
  const double dn = static_cast<double>(n);
  return -0.5 * dn * std::log(2.0 * std::numbers::pi * variance) -
         y_norm * y_norm / (2.0 * variance);
}

double mu_s_eps(const ChannelSpec& ch, double s, double eps) {
  const double g = ch.cost_threshold;
  const double nv = ch.noise_variance;
  if (!(s > 1.0)) throw DomainError("mu_s_eps: s must exceed 1");
  if (!(std::abs(eps) < g + nv)) throw DomainError("mu_s_eps: |eps| must be below Γ+N");
  return -(g + nv) / nv - nv * (g + eps) / (4.0 * g * (g + nv + eps)) * (s * s - 1.0) + s -
         std::log(0.5 + 0.5 * s) + std::log(1.0 + g / nv + eps / nv);
}

double s_star(const ChannelSpec& ch, double eps) {
  const double g = ch.cost_threshold;
  const double nv = ch.noise_variance;
  if (!(g + eps > 0.0)) throw DomainError("s_star: requires Γ + eps > 0");
  return (g * nv + 2.0 * g * g + 2.0 * g * eps - nv * eps) / (nv * (g + eps));
}

double big_f(const ChannelSpec& ch, double eps) {
  const double g = ch.cost_threshold;
  if (!(g + eps > 0.0)) throw DomainError("big_f: requires eps > -Γ");
  return -eps / (g + eps) + std::log1p(eps / g);
}

LogRatioReport qcc_qstar_log_ratio_check(const ChannelSpec& ch, std::int64_t n, double eps,
                                         double delta, std::span<const double> y_norm_grid) {
  const double g = ch.cost_threshold;
  const double nv = ch.noise_variance;
  if (n < 2) throw DomainError("log ratio check: n must be >= 2");
  if (!(std::abs(eps) < g + nv)) throw DomainError("log ratio check: |eps| must be below Γ+N");
  if (!(delta > 0.0 && delta < g + nv - std::abs(eps))) {
    throw DomainError("log ratio check: delta must lie in (0, Γ+N−|eps|)");
  }
  if (y_norm_grid.empty()) throw DomainError("log ratio check: empty grid");
  const double dn = static_cast<double>(n);
  const double centre = g + eps + nv;
  const ShellSpec shell = ShellSpec::make(n, g);

  LogRatioReport report;
  report.leading_term = 0.5 * dn * big_f(ch, eps);
  report.max_residual = -std::numeric_limits<double>::infinity();
  for (double y : y_norm_grid) {
    const double per_letter = y * y / dn;
    if (std::abs(per_letter - centre) > delta * (1.0 + 1e-12)) {
      throw DomainError("log ratio check: grid point " + std::to_string(y) +
                        " lies outside the admissible band");
    }
    const double lr = qcc_log_density(shell, ch, y) - gaussian_log_density(n, centre, y);
    report.y_norms.push_back(y);
    report.log_ratios.push_back(lr);
    if (lr - report.leading_term > report.max_residual) {
      report.max_residual = lr - report.leading_term;
      report.argmax_y_norm = y;
    }
  }
  return report;
}

std::vector<double> log_ratio_grid(const ChannelSpec& ch, std::int64_t n, double eps, double delta,
                                   int points) {
  if (points < 2) throw DomainError("log_ratio_grid: need at least two points");
  const double dn = static_cast<double>(n);
  const double centre = ch.cost_threshold + eps + ch.noise_variance;
  const double lo = std::max(centre - delta, 1e-12);
  const double hi = centre + delta;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double per_letter = lo + (hi - lo) * i / (points - 1);
    grid.push_back(std::sqrt(per_letter * dn));
  }
  return grid;
}

}  // namespace mpc
