#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpc {

enum class ConstraintKind { PositivePart, Square, OneSidedSquare, StepIndicator, SmoothedStep, PowerLaw };

/// One nonnegative, lower-semicontinuous cost-moment function f: ℝ → [0,∞)
/// applied to the normalized cost deviation.
///
///   PositivePart        max(u, 0)
///   Square              u²
///   OneSidedSquare      max(u, 0)²
///   StepIndicator(γc)   1{u > γc}
///   SmoothedStep(γc,α)  1 + α(u − γc) for u > γc, else 0
///   PowerLaw(p)         |u|^p, p >= 1
class ConstraintFunction {
 public:
  static ConstraintFunction positive_part();
  static ConstraintFunction square();
  static ConstraintFunction one_sided_square();
  static ConstraintFunction step_indicator(double threshold);
  static ConstraintFunction smoothed_step(double threshold, double slope);
  static ConstraintFunction power_law(double exponent);

  double operator()(double u) const;

  ConstraintKind kind() const { return kind_; }
  double threshold() const { return threshold_; }
  double slope() const { return slope_; }
  double exponent() const { return exponent_; }

  /// Eventually nondecreasing and divergent (false only for StepIndicator).
  bool diverges_upward() const;
  /// Bounded on (−∞, 0]; true for the one-sided kinds.
  bool bounded_left() const;
  /// f vanishes on (−∞, flat_left_point()]; meaningful when bounded_left().
  double flat_left_point() const;
  /// Smallest x with f(u) > level for every u > x. Requires diverges_upward().
  double upper_inverse(double level) const;
  /// Largest x with f(u) > level for every u < x. Requires !bounded_left().
  double lower_inverse(double level) const;
  /// Discontinuities or kinks worth placing on a search grid.
  std::vector<double> breakpoints() const;

  std::string name() const;
  std::string describe() const;

 private:
  ConstraintFunction(ConstraintKind kind, double threshold, double slope, double exponent)
      : kind_(kind), threshold_(threshold), slope_(slope), exponent_(exponent) {}

  ConstraintKind kind_;
  double threshold_;
  double slope_;
  double exponent_;
};

double evaluate(const ConstraintFunction& f, double u);

struct ConstraintItem {
  ConstraintFunction function;
  double budget;
};

/// Mean threshold Γ plus k moment constraints E[f_i(U)] <= Γ_i.
class ConstraintSet {
 public:
  /// Throws DomainError unless Γ > 0 and every Γ_i >= 0.
  ConstraintSet(double gamma, std::vector<ConstraintItem> items);

  double gamma() const { return gamma_; }
  const std::vector<ConstraintItem>& items() const { return items_; }
  std::size_t k() const { return items_.size(); }
  bool condition2_holds() const;
  /// True when every item is bounded on the negative half-line.
  bool all_bounded_left() const;
  std::string describe() const;

 private:
  double gamma_;
  std::vector<ConstraintItem> items_;
};

/// Finitely supported law on ℝ.
struct DiscreteDistribution {
  std::vector<double> atoms;
  std::vector<double> weights;

  /// Throws DomainError on size mismatch, negative weight, weight sum off by
  /// more than 1e-12, or more atoms than `max_atoms` (0 = no cap).
  void validate(std::size_t max_atoms = 0) const;
  std::size_t size() const { return atoms.size(); }
  double mean() const;

  template <class Fn>
  double expect(Fn&& fn) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) acc += weights[j] * fn(atoms[j]);
    return acc;
  }

  static DiscreteDistribution point_mass(double atom) { return {{atom}, {1.0}}; }
};

inline constexpr double kFeasibilityTolerance = 1e-9;

/// E[U] <= tol and E[f_i(U)] <= Γ_i + tol for all i.
bool check_membership_U(const DiscreteDistribution& p, const ConstraintSet& cs,
                        double tol = kFeasibilityTolerance);

/// Atoms are per-letter costs s >= 0; E[S] <= Γ + tol and
/// E[f_i(√n(S − Γ))] <= Γ_i + tol.
bool check_membership_S(const DiscreteDistribution& p, const ConstraintSet& cs, std::int64_t n,
                        double tol = kFeasibilityTolerance);

/// Largest u at which an atom of weight >= weight_floor can still satisfy
/// every divergent constraint. Throws UnboundedSupportError when no item diverges upward.
double support_bound(const ConstraintSet& cs, double weight_floor);

/// Mirror image of support_bound for items unbounded on the left; returns
/// -inf when every item is bounded on the left.
double lower_support_bound(const ConstraintSet& cs, double weight_floor);

}  // namespace mpc
