#pragma once

// Reference computations that share no code path with the library routines
// they check. Used by the verification suite and the unit tests.

#include <cstdint>
#include <vector>

#include "mpc/channel.hpp"

namespace mpc::oracle {

/// erf by its Maclaurin series for |x| < 3 and the Laplace continued fraction beyond.
double erf_reference(double x);
double normal_cdf_reference(double x);
/// Φ⁻¹ by bisection on normal_cdf_reference.
double normal_quantile_bisection(double p);
/// log Γ(x): shift to x >= 20, then Stirling with Bernoulli corrections up to x^{-13}.
double log_gamma_stirling(double x);
/// log I_ν(x) from Boost's cylindrical Bessel function in long double.
double log_bessel_i_reference(double nu, double x);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Hermite rule for ∫ e^{−x²} g(x) dx via Golub–Welsch.
Quadrature gauss_hermite(int points);

/// ∫₀^∞ Q^cc(ρ)·|S^{n−1}|ρ^{n−1} dρ by adaptive Gauss–Kronrod.
double qcc_radial_mass(const ChannelSpec& ch, std::int64_t n, double shell_cost);

/// Q^cc(y) in ℝ² by averaging the Gaussian kernel around the circle of radius R.
double qcc_planar_convolution(const ChannelSpec& ch, double radius, double y_norm);

/// log W(Y|X) − log q*(Y) from explicit n-dimensional vectors: X uniform on the
/// radius-√(ns) sphere, Z ~ N(0, N·I), q* = N(0, (Γ+N)·I).
std::vector<double> direct_log_ratio_samples(const ChannelSpec& ch, std::int64_t n, double s, std::size_t count,
                                             std::uint64_t seed);

/// Two-sample Kolmogorov–Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic 99% null quantile c(0.01)·√((n+m)/(nm)), c(0.01) = 1.6276.
double ks_critical_99(std::size_t n, std::size_t m);

/// min Σp_jφ_j over the simplex subject to Σp_j a_ij (<= or =) b_i for one or
/// two rows, evaluated as the Lagrangian dual max_λ min_j [φ_j + Σλ_i(a_ij − b_i)]
/// by nested golden-section search.
double grid_lp_dual(const std::vector<double>& phi, const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& rhs, const std::vector<bool>& equality);

/// inf E[Φ(Π)] over laws with E[Π] = mu and Var(Π) <= sigma2.
double pi_reformulation_limit(double mu, double sigma2);

}  // namespace mpc::oracle
