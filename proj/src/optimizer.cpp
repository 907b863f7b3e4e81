#include "mpc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "mpc/errors.hpp"
#include "mpc/lp.hpp"
#include "mpc/search.hpp"
#include "mpc/specfn.hpp"

namespace mpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MeanRow { Drop, LessEqual, Equal };

// Rows: simplex equality, optional mean row, one row per constraint item.
struct MomentLp {
  const ConstraintSet* cs;
  MeanRow mean;

  int rows() const { return 1 + (mean == MeanRow::Drop ? 0 : 1) + static_cast<int>(cs->k()); }

  void column(double u, Eigen::Ref<Eigen::VectorXd> out) const {
    int r = 0;
    out(r++) = 1.0;
    if (mean != MeanRow::Drop) out(r++) = u;
    for (const auto& item : cs->items()) out(r++) = item.function(u);
  }

  LpSolution solve(const std::vector<double>& atoms, const std::vector<double>& phi) const {
    const int m = rows();
    LpProblem lp;
    lp.A.resize(m, static_cast<Eigen::Index>(atoms.size()));
    lp.b.resize(m);
    lp.c.resize(static_cast<Eigen::Index>(atoms.size()));
    int r = 0;
    lp.b(r++) = 1.0;
    lp.sense.push_back(RowSense::Equal);
    if (mean != MeanRow::Drop) {
      lp.b(r++) = 0.0;
      lp.sense.push_back(mean == MeanRow::Equal ? RowSense::Equal : RowSense::LessEqual);
    }
    for (const auto& item : cs->items()) {
      lp.b(r++) = item.budget;
      lp.sense.push_back(RowSense::LessEqual);
    }
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      column(atoms[j], lp.A.col(static_cast<Eigen::Index>(j)));
      lp.c(static_cast<Eigen::Index>(j)) = phi[j];
    }
    return solve_lp(lp);
  }

  // φ(u) − yᵀa(u).
  double reduced_cost(double phi_u, double u, const Eigen::VectorXd& y) const {
    double acc = phi_u - y(0);
    int r = 1;
    if (mean != MeanRow::Drop) acc -= y(r++) * u;
    for (const auto& item : cs->items()) acc -= y(r++) * item.function(u);
    return acc;
  }

  double dual_objective(const Eigen::VectorXd& y) const {
    double acc = y(0);
    int r = mean == MeanRow::Drop ? 1 : 2;
    for (const auto& item : cs->items()) acc += y(r++) * item.budget;
    return acc;
  }
};

MeanRow to_row(MeanMode mode) { return mode == MeanMode::Equality ? MeanRow::Equal : MeanRow::LessEqual; }

// Offsets d_min·(d_max/d_min)^(t/(count−1)), t = 0..count−1.
void geometric_offsets(double d_min, double d_max, int count, std::vector<double>& out, double origin,
                       double sign) {
  if (!(d_max > d_min) || count < 2) return;
  const double ratio = std::log(d_max / d_min);
  for (int t = 0; t < count; ++t) {
    out.push_back(origin + sign * d_min * std::exp(ratio * t / (count - 1)));
  }
}

struct Domain {
  double lo;  // smallest atom the search may place
  double hi;
  double lo_ext;  // range scanned for the dual lower bound
  double hi_ext;
  MeanRow mean;
};

std::vector<double> build_grid(const ObjectiveSpec& obj, const ConstraintSet& cs, const Domain& dom,
                               const SearchOptions& opts, int restart) {
  std::vector<double> grid;
  const double width = obj.width();
  double centre = obj.centre();
  double half = width;
  if (restart > 0) {
    RngStream rng(opts.seed, static_cast<std::uint64_t>(restart));
    half *= 0.85 + 0.3 * rng.uniform();
    centre += (rng.uniform() - 0.5) * 0.2 * width;
  }
  double core_lo = std::max(dom.lo, centre - half);
  double core_hi = std::min(dom.hi, centre + half);
  if (core_lo >= core_hi) {
    if (centre - half > dom.hi) {
      core_hi = dom.hi;
      core_lo = std::max(dom.lo, dom.hi - 2.0 * half);
    } else {
      core_lo = dom.lo;
      core_hi = std::min(dom.hi, dom.lo + 2.0 * half);
    }
  }
  const int total = std::max(opts.grid_points, 16);
  const int core_count = total / 2;
  const int tail_count = total / 8;

  if (core_hi > core_lo) {
    double offset = 0.0;
    if (restart > 0) offset = RngStream(opts.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(restart)).uniform();
    const double step = (core_hi - core_lo) / core_count;
    for (int t = 0; t <= core_count; ++t) {
      grid.push_back(std::min(core_hi, core_lo + (t + (t == 0 || t == core_count ? 0.0 : offset - 0.5)) * step));
    }
    const double d_min = std::max(step, 1e-9);
    geometric_offsets(d_min, dom.hi - core_hi, tail_count, grid, core_hi, 1.0);
    geometric_offsets(d_min, core_lo - dom.lo, tail_count, grid, core_lo, -1.0);
  }
  // Multi-scale resolution around the origin, where the constraint functions bend.
  const double d0 = 1e-4 * std::max(1.0, width);
  if (dom.hi > 0.0) geometric_offsets(d0, dom.hi, tail_count, grid, 0.0, 1.0);
  if (dom.lo < 0.0) geometric_offsets(d0, -dom.lo, tail_count, grid, 0.0, -1.0);

  grid.push_back(dom.lo);
  grid.push_back(dom.hi);
  grid.push_back(0.0);
  for (const auto& item : cs.items()) {
    for (double bp : item.function.breakpoints()) grid.push_back(bp);
  }
  std::erase_if(grid, [&](double u) { return !(u >= dom.lo && u <= dom.hi) || !std::isfinite(u); });
  // A sparse layer past the truncation points. Atoms there carry less than the
  // weight floor, but the LP must see them for its duals to price the tails.
  const int ext = std::max(total / 16, 16);
  const double d_ext = 1e-3 * std::max(1.0, std::abs(dom.hi));
  if (dom.hi_ext > dom.hi) geometric_offsets(d_ext, dom.hi_ext - dom.hi, ext, grid, dom.hi, 1.0);
  if (dom.lo_ext < dom.lo) {
    geometric_offsets(1e-3 * std::max(1.0, std::abs(dom.lo)), dom.lo - dom.lo_ext, ext, grid, dom.lo, -1.0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Indices of interior local minima of `values`, best first, at most `count`.
std::vector<std::size_t> local_minima(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool left = i == 0 || values[i] <= values[i - 1];
    const bool right = i + 1 == values.size() || values[i] <= values[i + 1];
    if (left && right) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (idx.size() > count) idx.resize(count);
  return idx;
}

struct Refined {
  double u;
  double rc;
};

// Scans the reduced cost on a sorted point set and refines the best basins.
template <class Rc>
std::vector<Refined> refine_minima(const std::vector<double>& pts, Rc&& rc, std::size_t count) {
  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = rc(pts[i]);
  std::vector<Refined> out;
  for (std::size_t i : local_minima(values, count)) {
    const double a = i == 0 ? pts[i] : pts[i - 1];
    const double b = i + 1 == pts.size() ? pts[i] : pts[i + 1];
    ScalarMin m = golden_section_minimize(rc, a, b, 80);
    if (values[i] < m.value) m = {pts[i], values[i]};
    out.push_back({m.x, m.value});
  }
  return out;
}

struct RestartOutcome {
  DiscreteDistribution dist;
  double value = 1.0;
  double lower_bound = -kInf;
  bool converged = false;
  bool feasible = false;
};

double inner_value(const MomentLp& model, const ObjectiveSpec& obj, const std::vector<double>& atoms,
                   std::vector<double>* weights) {
  std::vector<double> phi(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) phi[j] = obj(atoms[j]);
  const LpSolution sol = model.solve(atoms, phi);
  if (sol.status != LpStatus::Optimal) return kInf;
  if (weights) weights->assign(sol.x.data(), sol.x.data() + sol.x.size());
  return sol.value;
}

RestartOutcome run_restart(const ObjectiveSpec& obj, const ConstraintSet& cs, const Domain& dom,
                           const SearchOptions& opts, int restart) {
  const MomentLp model{&cs, dom.mean};
  RestartOutcome out;
  std::vector<double> cols = build_grid(obj, cs, dom, opts, restart);
  std::vector<double> phi(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) phi[j] = obj(cols[j]);

  LpSolution sol = model.solve(cols, phi);
  if (sol.status == LpStatus::Infeasible) return out;
  if (sol.status != LpStatus::Optimal) {
    throw InfeasibleError("moment LP did not reach optimality on the candidate grid");
  }

  const double rc_tol = 1e-13;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const Eigen::VectorXd y = sol.duals;
    auto rc = [&](double u) { return model.reduced_cost(obj(u), u, y); };
    std::vector<double> sorted = cols;
    std::sort(sorted.begin(), sorted.end());
    bool added = false;
    for (const Refined& cand : refine_minima(sorted, rc, 12)) {
      if (cand.rc < -rc_tol && std::find(cols.begin(), cols.end(), cand.u) == cols.end()) {
        cols.push_back(cand.u);
        phi.push_back(obj(cand.u));
        added = true;
      }
    }
    if (!added) {
      out.converged = true;
      break;
    }
    LpSolution next = model.solve(cols, phi);
    if (next.status != LpStatus::Optimal) break;
    sol = std::move(next);
  }

  // Lagrangian bound: yᵀb + min_u rc(u) over the extended range.
  {
    const Eigen::VectorXd y = sol.duals;
    auto rc = [&](double u) { return model.reduced_cost(obj(u), u, y); };
    std::vector<double> pts = cols;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double min_rc = kInf;
    for (const Refined& cand : refine_minima(pts, rc, 16)) min_rc = std::min(min_rc, cand.rc);
    out.lower_bound = model.dual_objective(y) + std::min(min_rc, 0.0);
  }

  std::vector<double> atoms;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sol.x(static_cast<Eigen::Index>(j)) > 1e-15) atoms.push_back(cols[j]);
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> weights;
  double value = inner_value(model, obj, atoms, &weights);

  auto polish = [&] {
    // Coordinate descent on atom locations with the weights re-optimized.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        const double h = 1e-3 * std::max(1.0, std::abs(atoms[j]));
        const double a = std::max(dom.lo_ext, atoms[j] - h);
        const double b = std::min(dom.hi_ext, atoms[j] + h);
        std::vector<double> trial = atoms;
        auto f = [&](double u) {
          trial[j] = u;
          return inner_value(model, obj, trial, nullptr);
        };
        const ScalarMin m = golden_section_minimize(f, a, b, 40);
        if (m.value < value - 1e-15) {
          atoms[j] = m.x;
          value = inner_value(model, obj, atoms, &weights);
        }
      }
    }
  };
  polish();

  // Column generation tends to split an optimal atom across two neighbouring
  // columns; merge such pairs when the value does not degrade.
  for (bool merged = true; merged && atoms.size() > 1;) {
    merged = false;
    for (std::size_t j = 0; j + 1 < atoms.size(); ++j) {
      if (atoms[j + 1] - atoms[j] > 1e-3 * (1.0 + std::abs(atoms[j]))) continue;
      const double w = weights[j] + weights[j + 1];
      std::vector<double> trial = atoms;
      trial[j] = w > 0.0 ? (weights[j] * atoms[j] + weights[j + 1] * atoms[j + 1]) / w : atoms[j];
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      std::vector<double> trial_w;
      const double v = inner_value(model, obj, trial, &trial_w);
      if (v <= value + 0.1 * opts.tolerance) {
        atoms = std::move(trial);
        weights = std::move(trial_w);
        value = v;
        merged = true;
        break;
      }
    }
    if (merged) polish();
  }

  DiscreteDistribution dist;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (weights[j] > 1e-15) {
      dist.atoms.push_back(atoms[j]);
      dist.weights.push_back(weights[j]);
    }
  }
  double total = 0.0;
  for (double w : dist.weights) total += w;
  for (double& w : dist.weights) w /= total;

  out.dist = std::move(dist);
  out.value = out.dist.expect([&](double u) { return obj(u); });
  out.feasible = true;
  return out;
}

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ObjectiveSpec ObjectiveSpec::asymptotic(double shift, double kappa2) {
  if (!std::isfinite(shift) || !(kappa2 > 0.0) || !std::isfinite(kappa2)) {
    throw DomainError("asymptotic objective needs finite shift and kappa2 > 0");
  }
  ObjectiveSpec o;
  o.kind_ = Kind::Asymptotic;
  o.shift_ = shift;
  o.kappa2_ = kappa2;
  return o;
}

ObjectiveSpec ObjectiveSpec::finite_n(const ChannelSpec& ch, std::int64_t n, double gamma_thresh) {
  if (n < 1) throw DomainError("finite-n objective needs n >= 1");
  if (!(gamma_thresh > 0.0)) throw DomainError("finite-n objective needs gamma_thresh > 0");
  ObjectiveSpec o;
  o.kind_ = Kind::FiniteN;
  o.ch_ = ch;
  o.n_ = n;
  o.gamma_thresh_ = gamma_thresh;
  o.kappa2_ = capacity_derivative(ch) / std::sqrt(dispersion(ch));
  return o;
}

double ObjectiveSpec::operator()(double u) const {
  if (kind_ == Kind::Asymptotic) return std_normal_cdf(shift_ - kappa2_ * u);
  const double s = std::max(0.0, ch_.cost_threshold + u / std::sqrt(static_cast<double>(n_)));
  return phi_n_gamma(ch_, n_, gamma_thresh_, s);
}

double ObjectiveSpec::lower_limit() const {
  if (kind_ == Kind::Asymptotic) return -kInf;
  return -std::sqrt(static_cast<double>(n_)) * ch_.cost_threshold;
}

double ObjectiveSpec::centre() const {
  if (kind_ == Kind::Asymptotic) return shift_ / kappa2_;
  return std::sqrt(static_cast<double>(n_)) * (gamma_thresh_ - capacity(ch_)) / capacity_derivative(ch_);
}

double ObjectiveSpec::width() const { return 9.0 / kappa2_; }

std::optional<InnerLpResult> inner_weight_lp(std::span<const double> atoms, const ConstraintSet& cs,
                                             std::span<const double> phi_values, MeanMode mean) {
  if (atoms.size() != phi_values.size() || atoms.empty()) {
    throw DomainError("inner_weight_lp: atoms and phi_values must be nonempty and equal length");
  }
  const MomentLp model{&cs, to_row(mean)};
  const LpSolution sol = model.solve({atoms.begin(), atoms.end()}, {phi_values.begin(), phi_values.end()});
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (sol.status != LpStatus::Optimal) throw InfeasibleError("inner_weight_lp: LP did not converge");
  InnerLpResult res;
  res.weights.assign(sol.x.data(), sol.x.data() + sol.x.size());
  for (double& w : res.weights) w = std::max(w, 0.0);
  res.value = sol.value;
  return res;
}

OptimizerResult minimize_over_distributions(const ObjectiveSpec& objective, const ConstraintSet& cs,
                                            const SearchOptions& opts) {
  if (opts.restarts < 1) throw DomainError("search options: restarts must be >= 1");
  const double hard_lo = objective.lower_limit();

  Domain dom{};
  dom.hi = support_bound(cs, opts.weight_floor);
  const bool drop_mean =
      opts.mean_mode == MeanMode::Auto && cs.all_bounded_left() && !std::isfinite(hard_lo);
  dom.mean = drop_mean ? MeanRow::Drop : to_row(opts.mean_mode);

  if (std::isfinite(hard_lo)) {
    dom.lo = std::max(hard_lo, lower_support_bound(cs, opts.weight_floor));
    dom.lo_ext = hard_lo;
  } else if (cs.all_bounded_left()) {
    double flat = kInf;
    for (const auto& item : cs.items()) flat = std::min(flat, item.function.flat_left_point());
    if (drop_mean) {
      // Below every flat point the constraints vanish and φ only grows.
      dom.lo = std::min(flat, dom.hi);
    } else {
      // Mean row kept on a left-bounded family: truncate where φ is within 1e-10 of 1.
      const double cutoff = (objective.shift() - 6.4) / objective.kappa2();
      dom.lo = std::min({flat, cutoff, dom.hi});
    }
    dom.lo_ext = dom.lo;
  } else {
    dom.lo = lower_support_bound(cs, opts.weight_floor);
    dom.lo_ext = dom.lo - 1e3 * std::max(1.0, std::abs(dom.lo));
  }
  dom.lo = std::min(dom.lo, dom.hi);
  dom.hi_ext = dom.hi + 1e3 * std::max(1.0, std::abs(dom.hi));
  if (std::isfinite(hard_lo)) dom.lo_ext = std::max(dom.lo_ext, hard_lo);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  const int workers = std::clamp(opts.threads, 1, opts.restarts);
  if (workers == 1) {
    for (int i = 0; i < opts.restarts; ++i) outcomes[static_cast<std::size_t>(i)] = run_restart(objective, cs, dom, opts, i);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < opts.restarts; i += workers) {
            outcomes[static_cast<std::size_t>(i)] = run_restart(objective, cs, dom, opts, i);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  OptimizerResult result;
  const RestartOutcome* best = nullptr;
  double best_lb = -kInf;
  bool all_converged = true;
  for (const auto& o : outcomes) {
    if (!o.feasible) continue;
    result.restart_values.push_back(o.value);
    best_lb = std::max(best_lb, o.lower_bound);
    all_converged = all_converged && o.converged;
    if (!best) {
      best = &o;
      continue;
    }
    const double diff = o.value - best->value;
    if (diff < -1e-12) {
      best = &o;
    } else if (std::abs(diff) <= 1e-12) {
      if (o.dist.size() < best->dist.size() ||
          (o.dist.size() == best->dist.size() && lexicographically_less(o.dist.atoms, best->dist.atoms))) {
        best = &o;
      }
    }
  }
  if (!best) throw InfeasibleError("no distribution on the searched support satisfies the moment constraints");

  result.distribution = best->dist;
  result.value = best->value;
  result.restarts_used = opts.restarts;
  result.status = all_converged ? OptimizerStatus::Converged : OptimizerStatus::IterationCap;

  if (dom.mean == MeanRow::Drop) {
    result.mean_relaxed = true;
    const double m = result.distribution.mean();
    if (m > 0.0) {
      // Realize the relaxed mean row with a light atom far to the left.
      const double q = opts.tail_mass;
      const double left = std::min(-(1.0 - q) * m / q, dom.lo);
      for (double& w : result.distribution.weights) w *= 1.0 - q;
      result.distribution.atoms.insert(result.distribution.atoms.begin(), left);
      result.distribution.weights.insert(result.distribution.weights.begin(), q);
      result.value = result.distribution.expect([&](double u) { return objective(u); });
    }
  }
  result.value = std::clamp(result.value, 0.0, 1.0);
  // A dual bound above the primal value is LP rounding (seen up to ~1e-11).
  result.lower_bound = std::clamp(best_lb, 0.0, result.value);
  result.certificate_gap = result.value - result.lower_bound;
  return result;
}

namespace {

void require_matching_gamma(const ChannelSpec& ch, const ConstraintSet& cs) {
  if (std::abs(ch.cost_threshold - cs.gamma()) > 1e-12 * std::max(1.0, ch.cost_threshold)) {
    throw DomainError("channel cost_threshold and constraint-set gamma disagree");
  }
}

}  // namespace

OptimizerResult asymptotic_limit(const ChannelSpec& ch, const ConstraintSet& cs, double r,
                                 const SearchOptions& opts) {
  require_matching_gamma(ch, cs);
  if (!std::isfinite(r)) throw DomainError("asymptotic_limit: r must be finite");
  const double sqrt_v = std::sqrt(dispersion(ch));
  const ObjectiveSpec obj = ObjectiveSpec::asymptotic(r / sqrt_v, capacity_derivative(ch) / sqrt_v);
  return minimize_over_distributions(obj, cs, opts);
}

OptimizerResult finite_n_converse_value(const ChannelSpec& ch, const ConstraintSet& cs, std::int64_t n,
                                        double gamma_thresh, const SearchOptions& opts) {
  require_matching_gamma(ch, cs);
  const ObjectiveSpec obj = ObjectiveSpec::finite_n(ch, n, gamma_thresh);
  SearchOptions inner = opts;
  if (inner.mean_mode == MeanMode::Auto) inner.mean_mode = MeanMode::Inequality;
  OptimizerResult res = minimize_over_distributions(obj, cs, inner);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (double& a : res.distribution.atoms) a = std::max(0.0, ch.cost_threshold + a / root_n);
  return res;
}

LipschitzAuditReport lipschitz_audit(const ChannelSpec& ch, const ConstraintSet& cs,
                                     std::span<const double> r_grid, const SearchOptions& opts) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw DomainError("lipschitz_audit: r_grid must be sorted");
  LipschitzAuditReport rep;
  rep.r_grid.assign(r_grid.begin(), r_grid.end());
  for (double r : r_grid) rep.values.push_back(asymptotic_limit(ch, cs, r, opts).value);
  for (std::size_t i = 1; i < rep.values.size(); ++i) {
    const double dr = rep.r_grid[i] - rep.r_grid[i - 1];
    if (dr <= 0.0) continue;
    rep.max_ratio = std::max(rep.max_ratio, std::abs(rep.values[i] - rep.values[i - 1]) / dr);
  }
  rep.bound = 1.0 / (std::sqrt(dispersion(ch)) * std::sqrt(2.0 * std::numbers::pi)) + 2.0 * opts.tolerance;
  rep.passed = rep.max_ratio <= rep.bound;
  return rep;
}

}  // namespace mpc
