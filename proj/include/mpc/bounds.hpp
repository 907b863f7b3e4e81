#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpc/channel.hpp"
#include "mpc/constraints.hpp"
#include "mpc/optimizer.hpp"

namespace mpc {

/// Target rate R = C(Γ) + r/√n. When r_prime is empty the auxiliary rate r′ < r
/// is chosen to maximize the bound.
struct ConverseQuery {
  ChannelSpec ch;
  ConstraintSet cs;
  std::int64_t n;
  double r;
  std::optional<double> r_prime;
};

struct BoundResult {
  double value = 0.0;      // clamped to [0,1]
  double raw_value = 0.0;  // before clamping
  double r_prime = 0.0;
  double gamma_thresh = 0.0;
  double penalty = 0.0;  // 15^{3/4}/√n
  double slack = 0.0;    // exp((r′ − r)√n)
  OptimizerResult optimizer;
};

/// max(0, min_{S} E[φ_{n,γ}(S)] − 15^{3/4}/√n − exp((r′−r)√n)) at γ = C(Γ) + r′/√n.
BoundResult converse_lower_bound(const ConverseQuery& q, const SearchOptions& opts);

/// Monte Carlo settings. Samples are split into `batches` blocks; block b draws
/// from RngStream(seed, b), so results do not depend on the thread count.
struct MCConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  int batches = 100;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // batch-means standard error
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// P(log W(Y|X)/q(Y) <= nγ) with ||X||²/n drawn from P_S and q = N(0, Γ+N)ⁿ.
MCEstimate mc_converse_probability(const ChannelSpec& ch, const DiscreteDistribution& p_s, std::int64_t n,
                                   double gamma_thresh, const MCConfig& mc);

/// Shell mixture: with probability p_j the codeword is uniform on the sphere of
/// radius √(nΓ_j), Γ_j = Γ + u_j/√n.
struct AchievabilityQuery {
  ChannelSpec ch;
  ConstraintSet cs;
  std::int64_t n;
  double r;
  double theta;
  DiscreteDistribution mixture;  // atoms are u_j
  MCConfig mc;
};

/// n^{-3/4}.
double default_theta(std::int64_t n);

/// Per-component shell costs Γ_j; throws DomainError if any is not positive.
std::vector<double> shell_costs(const AchievabilityQuery& q);

/// log Σ_j p_j Q_j^cc(y) as a function of ||y||.
double mixture_log_output_density(const ChannelSpec& ch, const AchievabilityQuery& q, double y_norm);

/// θ minimizing the estimated bound, chosen on a pilot run drawn from streams
/// disjoint from those of mc_achievability_epsilon. Any θ > 0 gives a valid bound.
double select_theta(const AchievabilityQuery& q, std::uint64_t pilot_samples);

/// P((1/n) log W(Y|X)/P̄W(Y) <= C(Γ) + r/√n + θ) + e^{−nθ}, X drawn from the shell mixture.
MCEstimate mc_achievability_epsilon(const AchievabilityQuery& q);

/// Σ_j p_j Φ(−C′(Γ)u_j/√V(Γ_j) + r/√V(Γ_j) + κ′/√(nV(Γ_j))). κ′ absorbs
/// unspecified constants and is a heuristic knob.
double analytic_achievability_curve(const ChannelSpec& ch, const AchievabilityQuery& q, double kappa_prime);

/// Chebyshev bound (4nNΓ_j + 2nN²)/(nδ)² on Q_j^cc(| ||Y||²/n − Γ_j − N | > δ).
double delta_n_shell_tail(const ChannelSpec& ch, const ShellSpec& shell, double delta);

struct TailAuditReport {
  std::vector<std::int64_t> n;
  std::vector<double> excursion;    // √n·a_n = n^{1/6}
  std::vector<double> sup_mass;     // largest feasible weight at the excursion point
  std::vector<double> markov_bound; // min_i Γ_i / f_i(excursion)
  bool nonincreasing = false;
  bool within_markov = false;
};

/// Worst-case two-atom laws (mass m at n^{1/6}, the rest on a compensating
/// nonpositive atom); the supremal m must shrink along n_list.
TailAuditReport tail_concentration_audit(const ConstraintSet& cs, const std::vector<std::int64_t>& n_list);

}  // namespace mpc
