#include "mpc/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <numeric>
#include <sstream>

#include "mpc/errors.hpp"

namespace mpc {

ConstraintFunction ConstraintFunction::positive_part() {
  return {ConstraintKind::PositivePart, 0.0, 0.0, 1.0};
}
ConstraintFunction ConstraintFunction::square() { return {ConstraintKind::Square, 0.0, 0.0, 2.0}; }
ConstraintFunction ConstraintFunction::one_sided_square() {
  return {ConstraintKind::OneSidedSquare, 0.0, 0.0, 2.0};
}
ConstraintFunction ConstraintFunction::step_indicator(double threshold) {
  if (!std::isfinite(threshold)) throw DomainError("step_indicator: threshold must be finite");
  return {ConstraintKind::StepIndicator, threshold, 0.0, 0.0};
}
ConstraintFunction ConstraintFunction::smoothed_step(double threshold, double slope) {
  if (!std::isfinite(threshold)) throw DomainError("smoothed_step: threshold must be finite");
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw DomainError("smoothed_step: slope must be positive");
  }
  return {ConstraintKind::SmoothedStep, threshold, slope, 1.0};
}
ConstraintFunction ConstraintFunction::power_law(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw DomainError("power_law: exponent must be >= 1");
  }
  return {ConstraintKind::PowerLaw, 0.0, 0.0, exponent};
}

double ConstraintFunction::operator()(double u) const {
  switch (kind_) {
    case ConstraintKind::PositivePart:
      return u > 0.0 ? u : 0.0;
    case ConstraintKind::Square:
      return u * u;
    case ConstraintKind::OneSidedSquare:
      return u > 0.0 ? u * u : 0.0;
    case ConstraintKind::StepIndicator:
      return u > threshold_ ? 1.0 : 0.0;
    case ConstraintKind::SmoothedStep:
      return u > threshold_ ? 1.0 + slope_ * (u - threshold_) : 0.0;
    case ConstraintKind::PowerLaw:
      return std::pow(std::abs(u), exponent_);
  }
  return 0.0;
}

bool ConstraintFunction::diverges_upward() const { return kind_ != ConstraintKind::StepIndicator; }

bool ConstraintFunction::bounded_left() const {
  return kind_ != ConstraintKind::Square && kind_ != ConstraintKind::PowerLaw;
}

double ConstraintFunction::flat_left_point() const {
  switch (kind_) {
    case ConstraintKind::StepIndicator:
    case ConstraintKind::SmoothedStep:
      return threshold_;
    case ConstraintKind::PositivePart:
    case ConstraintKind::OneSidedSquare:
      return 0.0;
    default:
      return -std::numeric_limits<double>::infinity();
  }
}

double ConstraintFunction::upper_inverse(double level) const {
  if (!diverges_upward()) throw UnboundedSupportError("step indicator has no upper inverse");
  if (level < 0.0) return -std::numeric_limits<double>::infinity();
  switch (kind_) {
    case ConstraintKind::PositivePart:
      return level;
    case ConstraintKind::Square:
    case ConstraintKind::OneSidedSquare:
      return std::sqrt(level);
    case ConstraintKind::SmoothedStep:
      return threshold_ + std::max(0.0, level - 1.0) / slope_;
    case ConstraintKind::PowerLaw:
      return std::pow(level, 1.0 / exponent_);
    default:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

double ConstraintFunction::lower_inverse(double level) const {
  if (bounded_left()) return -std::numeric_limits<double>::infinity();
  if (level < 0.0) return std::numeric_limits<double>::infinity();
  return kind_ == ConstraintKind::Square ? -std::sqrt(level) : -std::pow(level, 1.0 / exponent_);
}

std::vector<double> ConstraintFunction::breakpoints() const {
  switch (kind_) {
    case ConstraintKind::StepIndicator:
    case ConstraintKind::SmoothedStep:
      return {threshold_};
    default:
      return {0.0};
  }
}

std::string ConstraintFunction::name() const {
  switch (kind_) {
    case ConstraintKind::PositivePart:
      return "positive_part";
    case ConstraintKind::Square:
      return "square";
    case ConstraintKind::OneSidedSquare:
      return "one_sided_square";
    case ConstraintKind::StepIndicator:
      return "step_indicator";
    case ConstraintKind::SmoothedStep:
      return "smoothed_step";
    case ConstraintKind::PowerLaw:
      return "power_law";
  }
  return "unknown";
}

std::string ConstraintFunction::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << name();
  switch (kind_) {
    case ConstraintKind::StepIndicator:
      os << "(threshold=" << threshold_ << ")";
      break;
    case ConstraintKind::SmoothedStep:
      os << "(threshold=" << threshold_ << ";slope=" << slope_ << ")";
      break;
    case ConstraintKind::PowerLaw:
      os << "(exponent=" << exponent_ << ")";
      break;
    default:
      break;
  }
  return os.str();
}

double evaluate(const ConstraintFunction& f, double u) { return f(u); }

ConstraintSet::ConstraintSet(double gamma, std::vector<ConstraintItem> items)
    : gamma_(gamma), items_(std::move(items)) {
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw DomainError("constraint set: Γ must be positive (budget domain (0,∞) × [0,∞)^k)");
  }
  for (const auto& item : items_) {
    if (!(item.budget >= 0.0) || !std::isfinite(item.budget)) {
      throw DomainError("constraint set: every budget Γ_i must be finite and >= 0 "
                        "(budget domain (0,∞) × [0,∞)^k)");
    }
  }
}

bool ConstraintSet::condition2_holds() const {
  return std::any_of(items_.begin(), items_.end(),
                     [](const ConstraintItem& it) { return it.function.diverges_upward(); });
}

bool ConstraintSet::all_bounded_left() const {
  return std::all_of(items_.begin(), items_.end(),
                     [](const ConstraintItem& it) { return it.function.bounded_left(); });
}

std::string ConstraintSet::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) os << '+';
    os << items_[i].function.describe() << "<=" << items_[i].budget;
  }
  return items_.empty() ? std::string("mean_only") : os.str();
}

void DiscreteDistribution::validate(std::size_t max_atoms) const {
  if (atoms.size() != weights.size()) throw DomainError("distribution: atom/weight size mismatch");
  if (atoms.empty()) throw DomainError("distribution: no atoms");
  if (max_atoms != 0 && atoms.size() > max_atoms) {
    throw DomainError("distribution: more atoms than the cap");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (!std::isfinite(atoms[j])) throw DomainError("distribution: non-finite atom");
    if (!(weights[j] >= 0.0)) throw DomainError("distribution: negative weight");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("distribution: weights do not sum to 1");
}

double DiscreteDistribution::mean() const {
  return expect([](double u) { return u; });
}

bool check_membership_U(const DiscreteDistribution& p, const ConstraintSet& cs, double tol) {
  if (p.mean() > tol) return false;
  for (const auto& item : cs.items()) {
    if (p.expect(item.function) > item.budget + tol) return false;
  }
  return true;
}

bool check_membership_S(const DiscreteDistribution& p, const ConstraintSet& cs, std::int64_t n,
                        double tol) {
  if (std::any_of(p.atoms.begin(), p.atoms.end(), [](double s) { return s < 0.0; })) return false;
  if (p.mean() > cs.gamma() + tol) return false;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double g = cs.gamma();
  for (const auto& item : cs.items()) {
    const double moment = p.expect([&](double s) { return item.function(root_n * (s - g)); });
    if (moment > item.budget + tol) return false;
  }
  return true;
}

double support_bound(const ConstraintSet& cs, double weight_floor) {
  if (!(weight_floor > 0.0)) throw DomainError("support_bound: weight_floor must be positive");
  if (!cs.condition2_holds()) {
    throw UnboundedSupportError(
        "no constraint function diverges upward; the support is unbounded (for an excess-cost "
        "constraint use smoothed_step instead of step_indicator)");
  }
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& item : cs.items()) {
    if (!item.function.diverges_upward()) continue;
    bound = std::min(bound, item.function.upper_inverse(item.budget / weight_floor));
  }
  return bound;
}

double lower_support_bound(const ConstraintSet& cs, double weight_floor) {
  if (!(weight_floor > 0.0)) throw DomainError("lower_support_bound: weight_floor must be positive");
  double bound = -std::numeric_limits<double>::infinity();
  for (const auto& item : cs.items()) {
    if (item.function.bounded_left()) continue;
    bound = std::max(bound, item.function.lower_inverse(item.budget / weight_floor));
  }
  return bound;
}

}  // namespace mpc
