#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mpc/channel.hpp"
#include "mpc/constraints.hpp"

namespace mpc {

/// Pointwise objective φ(u) of the moment problem inf E[φ(U)] over U ∈ U_{f,Γ}.
///
/// Asymptotic: φ(u) = Φ(shift − κ₂u), with κ₁r folded into `shift`.
/// FiniteN:    φ(u) = φ_{n,γ}(Γ + u/√n), the normal approximation of the
///             converse event for per-letter cost s = Γ + u/√n (u >= −√nΓ).
class ObjectiveSpec {
 public:
  enum class Kind { Asymptotic, FiniteN };

  static ObjectiveSpec asymptotic(double shift, double kappa2);
  static ObjectiveSpec finite_n(const ChannelSpec& ch, std::int64_t n, double gamma_thresh);

  double operator()(double u) const;

  Kind kind() const { return kind_; }
  double shift() const { return shift_; }
  double kappa2() const { return kappa2_; }
  /// Hard lower limit on u (−inf for Asymptotic, −√nΓ for FiniteN).
  double lower_limit() const;
  /// Centre and half-width of the region where φ moves away from 0 and 1.
  double centre() const;
  double width() const;

 private:
  Kind kind_ = Kind::Asymptotic;
  double shift_ = 0.0;
  double kappa2_ = 1.0;
  ChannelSpec ch_{1.0, 1.0};
  std::int64_t n_ = 0;
  double gamma_thresh_ = 0.0;
};

/// How the mean constraint E[U] <= 0 enters the search.
///   Auto: dropped when every f_i is bounded on (−∞,0] and the objective has
///         no hard lower limit (an atom escaping to −∞ then buys arbitrary mean
///         slack at vanishing weight), kept as an inequality otherwise.
enum class MeanMode { Auto, Inequality, Equality };

struct SearchOptions {
  int restarts = 4;
  int threads = 1;
  std::uint64_t seed = 1;
  int grid_points = 1200;
  int max_iterations = 200;
  double tolerance = 1e-9;
  double atom_tolerance = 1e-10;
  double weight_floor = 1e-6;
  /// Weight of the far-negative atom used to realize a dropped mean constraint.
  double tail_mass = 1e-7;
  MeanMode mean_mode = MeanMode::Auto;
};

enum class OptimizerStatus { Converged, IterationCap, Infeasible };

struct OptimizerResult {
  DiscreteDistribution distribution;
  double value = 1.0;
  OptimizerStatus status = OptimizerStatus::Infeasible;
  int restarts_used = 0;
  /// value − lower_bound; the lower bound is a Lagrangian dual bound whose
  /// inner minimum is taken on a dense grid, so it is a proxy, not a proof.
  double certificate_gap = 0.0;
  double lower_bound = 0.0;
  bool mean_relaxed = false;
  std::vector<double> restart_values;
};

struct InnerLpResult {
  std::vector<double> weights;
  double value = 0.0;
};

/// Best weights on fixed atoms: min Σp_jφ_j over the simplex with
/// Σp_ju_j <= 0 (or = 0) and Σp_jf_i(u_j) <= Γ_i. Empty when infeasible.
std::optional<InnerLpResult> inner_weight_lp(std::span<const double> atoms,
                                             const ConstraintSet& cs,
                                             std::span<const double> phi_values,
                                             MeanMode mean = MeanMode::Inequality);

/// inf E[φ(U)] over U ∈ U_{f,Γ} restricted to at most k+2 atoms.
/// Throws UnboundedSupportError when no constraint diverges upward, InfeasibleError when no
/// candidate support is feasible.
OptimizerResult minimize_over_distributions(const ObjectiveSpec& objective, const ConstraintSet& cs,
                                            const SearchOptions& opts);

/// Limiting minimum error probability at second-order rate r:
/// inf E[Φ(r/√V − C′U/√V)].
OptimizerResult asymptotic_limit(const ChannelSpec& ch, const ConstraintSet& cs, double r,
                                 const SearchOptions& opts);

/// min over S_{n,f,Γ} of E[φ_{n,γ}(S)]. The returned atoms are per-letter costs s >= 0.
OptimizerResult finite_n_converse_value(const ChannelSpec& ch, const ConstraintSet& cs,
                                        std::int64_t n, double gamma_thresh,
                                        const SearchOptions& opts);

struct LipschitzAuditReport {
  std::vector<double> r_grid;
  std::vector<double> values;
  double max_ratio = 0.0;
  double bound = 0.0;  // (1/√V)/√(2π) + 2·tolerance
  bool passed = false;
};

/// Adjacent-pair slopes of r ↦ asymptotic_limit(r) against the Lipschitz
/// constant of the limit function. r_grid must be sorted.
LipschitzAuditReport lipschitz_audit(const ChannelSpec& ch, const ConstraintSet& cs,
                                     std::span<const double> r_grid, const SearchOptions& opts);

}  // namespace mpc
