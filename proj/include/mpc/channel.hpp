#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpc/specfn.hpp"

namespace mpc {

/// AWGN channel W(·|x) = N(x, N) with mean-cost threshold Γ (both power units).
struct ChannelSpec {
  double noise_variance;
  double cost_threshold;

  /// Throws DomainError unless both values are positive and finite.
  static ChannelSpec make(double noise_variance, double cost_threshold);
};

/// Uniform input on the sphere of radius √(n·shell_cost) in ℝⁿ.
struct ShellSpec {
  std::int64_t blocklength;
  double shell_cost;
  double radius;

  static ShellSpec make(std::int64_t blocklength, double shell_cost);
};

// Closed forms; all rates in nats per channel use.
double capacity(const ChannelSpec& ch);
double capacity_derivative(const ChannelSpec& ch);
double dispersion(const ChannelSpec& ch);
/// Variance of the information density log W(Y|x)/Q*(Y) given input x.
double nu_x(const ChannelSpec& ch, double x);

/// One draw of log W(Y|X)/q(Y), q = N(0,(Γ+N)I), for any input with ||X||²/n = s.
double log_density_ratio_sample(const ChannelSpec& ch, std::int64_t n, double s, RngStream& rng);

/// Argument of Φ inside phi_n_gamma.
double phi_n_gamma_argument(const ChannelSpec& ch, std::int64_t n, double gamma, double s);

/// Normal approximation of P(log W/q <= nγ) for an input of per-letter cost s.
double phi_n_gamma(const ChannelSpec& ch, std::int64_t n, double gamma, double s);

/// log of the output density of a shell input through the channel, as a
/// function of ||y|| alone. Requires n >= 2 and y_norm > 0.
double qcc_log_density(const ShellSpec& shell, const ChannelSpec& ch, double y_norm);

/// log density of N(0, variance·I_n) at any y with ||y|| = y_norm.
double gaussian_log_density(std::int64_t n, double variance, double y_norm);

/// Exponent of the log-ratio bound after substituting s = √(1+z²).
double mu_s_eps(const ChannelSpec& ch, double s, double eps);

/// Maximizer of mu_s_eps over s.
double s_star(const ChannelSpec& ch, double eps);

/// F(ε) = mu_s_eps(s_star(ε), ε) = -ε/(Γ+ε) + log(1+ε/Γ).
double big_f(const ChannelSpec& ch, double eps);

/// Outcome of comparing the shell output density against the mismatched
/// Gaussian N(0, (Γ+ε+N)I) on a grid of output radii.
struct LogRatioReport {
  std::vector<double> y_norms;
  std::vector<double> log_ratios;  // log Q^cc/Q* at each grid point
  double leading_term = 0.0;       // (n/2)·F(ε)
  double max_residual = 0.0;       // max log ratio − leading_term
  double argmax_y_norm = 0.0;
};

/// Shell at cost Γ (= ch.cost_threshold); Q* at Γ' = Γ + eps. Every grid
/// point must satisfy | ||y||²/n − (Γ'+N) | <= delta.
LogRatioReport qcc_qstar_log_ratio_check(const ChannelSpec& ch, std::int64_t n, double eps,
                                         double delta, std::span<const double> y_norm_grid);

/// Evenly spaced radii whose squared per-letter norms span the admissible band.
std::vector<double> log_ratio_grid(const ChannelSpec& ch, std::int64_t n, double eps, double delta,
                                   int points);

}  // namespace mpc
