#include "mpc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "mpc/errors.hpp"
#include "mpc/search.hpp"
#include "mpc/specfn.hpp"

namespace mpc {

namespace {

const double kBerryEsseen = std::pow(15.0, 0.75);

// Runs `draw(rng)` (returning 0 or 1, or any bounded score) over the batch
// layout in `mc` and reduces batch means in batch order.
template <class Draw>
MCEstimate batched_estimate(const MCConfig& mc, Draw&& draw) {
  if (mc.samples == 0) throw DomainError("Monte Carlo needs at least one sample");
  const auto batches = static_cast<std::uint64_t>(std::max(1, mc.batches));
  const std::uint64_t used = std::min<std::uint64_t>(batches, mc.samples);
  std::vector<double> means(used, 0.0);
  std::vector<std::uint64_t> counts(used, 0);
  for (std::uint64_t b = 0; b < used; ++b) counts[b] = mc.samples / used + (b < mc.samples % used ? 1 : 0);

  auto run_batch = [&](std::uint64_t b) {
    RngStream rng(mc.seed, b);
    KahanSum acc;
    for (std::uint64_t i = 0; i < counts[b]; ++i) acc.add(draw(rng));
    means[b] = acc.value() / static_cast<double>(counts[b]);
  };

  const int workers = std::clamp(mc.threads, 1, static_cast<int>(used));
  if (workers == 1) {
    for (std::uint64_t b = 0; b < used; ++b) run_batch(b);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t b = static_cast<std::uint64_t>(w); b < used; b += static_cast<std::uint64_t>(workers)) {
            run_batch(b);
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

  KahanSum total;
  for (std::uint64_t b = 0; b < used; ++b) total.add(means[b] * static_cast<double>(counts[b]));
  MCEstimate est;
  est.samples = mc.samples;
  est.seed = mc.seed;
  est.mean = total.value() / static_cast<double>(mc.samples);
  if (used > 1) {
    KahanSum sq;
    KahanSum plain;
    for (std::uint64_t b = 0; b < used; ++b) plain.add(means[b]);
    const double avg = plain.value() / static_cast<double>(used);
    for (std::uint64_t b = 0; b < used; ++b) sq.add((means[b] - avg) * (means[b] - avg));
    est.std_error = std::sqrt(sq.value() / static_cast<double>(used - 1) / static_cast<double>(used));
  }
  return est;
}

// Inverse-CDF draw of an atom index.
std::size_t draw_index(const std::vector<double>& cumulative, RngStream& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulative_weights(const DiscreteDistribution& p) {
  std::vector<double> c(p.weights.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = acc += p.weights[j];
  return c;
}

}  // namespace

BoundResult converse_lower_bound(const ConverseQuery& q, const SearchOptions& opts) {
  if (q.n < 2) throw DomainError("converse_lower_bound: n must be >= 2");
  if (!std::isfinite(q.r)) throw DomainError("converse_lower_bound: r must be finite");
  const double root_n = std::sqrt(static_cast<double>(q.n));
  const double cap = capacity(q.ch);
  const double penalty = kBerryEsseen / root_n;

  auto evaluate = [&](double r_prime, BoundResult& out) {
    out.r_prime = r_prime;
    out.gamma_thresh = cap + r_prime / root_n;
    out.penalty = penalty;
    out.slack = std::exp((r_prime - q.r) * root_n);
    out.optimizer = finite_n_converse_value(q.ch, q.cs, q.n, out.gamma_thresh, opts);
    out.raw_value = out.optimizer.value - penalty - out.slack;
    out.value = std::clamp(out.raw_value, 0.0, 1.0);
  };

  // γ must stay positive.
  const double r_floor = -cap * root_n * (1.0 - 1e-9);
  BoundResult best;
  if (q.r_prime) {
    if (!(*q.r_prime < q.r)) throw DomainError("converse_lower_bound: r_prime must be below r");
    if (!(*q.r_prime > r_floor)) throw DomainError("converse_lower_bound: r_prime gives a nonpositive threshold");
    evaluate(*q.r_prime, best);
    return best;
  }
  if (!(q.r > r_floor)) {
    // Every admissible r′ has C + r′/√n <= 0; the bound is vacuous.
    best.penalty = penalty;
    best.r_prime = q.r;
    return best;
  }
  // The slack needs r − r′ of order log(n)/√n before it drops below the
  // Berry–Esseen penalty, so the bracket is wider than 3√V/√n alone.
  const double width = (3.0 * std::sqrt(dispersion(q.ch)) + 0.5 * std::log(static_cast<double>(q.n))) / root_n;
  const double a = std::max(q.r - width, r_floor);
  const double b = q.r - 1e-6 * width;
  BoundResult scratch;
  auto neg = [&](double rp) {
    evaluate(rp, scratch);
    return -scratch.raw_value;
  };
  const ScalarMin m = golden_section_minimize(neg, a, b, 30);
  evaluate(m.x, best);
  return best;
}

MCEstimate mc_converse_probability(const ChannelSpec& ch, const DiscreteDistribution& p_s, std::int64_t n,
                                   double gamma_thresh, const MCConfig& mc) {
  p_s.validate();
  for (double s : p_s.atoms) {
    if (!(s >= 0.0)) throw DomainError("mc_converse_probability: atoms of P_S must be nonnegative");
  }
  const std::vector<double> cum = cumulative_weights(p_s);
  const double threshold = static_cast<double>(n) * gamma_thresh;
  return batched_estimate(mc, [&](RngStream& rng) {
    const double s = p_s.atoms[draw_index(cum, rng)];
    return log_density_ratio_sample(ch, n, s, rng) <= threshold ? 1.0 : 0.0;
  });
}

double default_theta(std::int64_t n) { return std::pow(static_cast<double>(n), -0.75); }

std::vector<double> shell_costs(const AchievabilityQuery& q) {
  const double root_n = std::sqrt(static_cast<double>(q.n));
  std::vector<double> out;
  for (double u : q.mixture.atoms) {
    const double g = q.ch.cost_threshold + u / root_n;
    if (!(g > 0.0)) {
      throw DomainError("shell cost Γ + u/√n is not positive for an atom of the mixture; increase n");
    }
    out.push_back(g);
  }
  return out;
}

double mixture_log_output_density(const ChannelSpec& ch, const AchievabilityQuery& q, double y_norm) {
  const std::vector<double> costs = shell_costs(q);
  std::vector<double> terms;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    if (q.mixture.weights[j] <= 0.0) continue;
    terms.push_back(std::log(q.mixture.weights[j]) + qcc_log_density(ShellSpec::make(q.n, costs[j]), ch, y_norm));
  }
  return log_sum_exp(terms);
}

namespace {

// Draws log W(Y|X)/P̄W(Y) − n(C + r/√n) for X from the shell mixture.
class ShellMixtureSampler {
 public:
  explicit ShellMixtureSampler(const AchievabilityQuery& q) : q_(q), cum_(cumulative_weights(q.mixture)) {
    if (q.n < 2) throw DomainError("shell mixture sampling needs n >= 2");
    q.mixture.validate();
    if (!check_membership_U(q.mixture, q.cs)) {
      throw DomainError("the shell mixture violates the moment constraints");
    }
    for (double g : shell_costs(q)) shells_.push_back(ShellSpec::make(q.n, g));
    for (double w : q.mixture.weights) {
      log_w_.push_back(w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity());
    }
    const double dn = static_cast<double>(q.n);
    rate_ = dn * (capacity(q.ch) + q.r / std::sqrt(dn));
    log_w_const_ = -0.5 * dn * std::log(2.0 * std::numbers::pi * q.ch.noise_variance);
  }

  double excess(RngStream& rng) const {
    const double nv = q_.ch.noise_variance;
    const double radius = shells_[draw_index(cum_, rng)].radius;
    // By spherical symmetry only the noise component along X matters.
    const double z1 = std::sqrt(nv) * rng.normal();
    const double z_sq = z1 * z1 + nv * rng.chi_squared(static_cast<std::uint64_t>(q_.n - 1));
    const double y_sq = radius * radius + 2.0 * radius * z1 + z_sq;
    const double y_norm = std::sqrt(std::max(y_sq, 1e-300));
    std::vector<double> terms(shells_.size());
    for (std::size_t c = 0; c < shells_.size(); ++c) {
      terms[c] = log_w_[c] + qcc_log_density(shells_[c], q_.ch, y_norm);
    }
    return log_w_const_ - z_sq / (2.0 * nv) - log_sum_exp(terms) - rate_;
  }

 private:
  const AchievabilityQuery& q_;
  std::vector<double> cum_;
  std::vector<ShellSpec> shells_;
  std::vector<double> log_w_;
  double rate_ = 0.0;
  double log_w_const_ = 0.0;
};

// Pilot streams live far from the main estimator's stream ids.
constexpr std::uint64_t kPilotStreamBase = 1ULL << 40;

}  // namespace

double select_theta(const AchievabilityQuery& q, std::uint64_t pilot_samples) {
  if (pilot_samples < 100) throw DomainError("select_theta: need at least 100 pilot samples");
  const ShellMixtureSampler sampler(q);
  RngStream rng(q.mc.seed, kPilotStreamBase);
  std::vector<double> ex(pilot_samples);
  for (auto& e : ex) e = sampler.excess(rng);
  std::sort(ex.begin(), ex.end());
  // Minimize F̂(t) + e^{−t} over t = nθ > 0, with F̂ the pilot empirical CDF.
  const double m = static_cast<double>(ex.size());
  double best_t = std::log(m);
  double best = 1.0 + std::exp(-best_t);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const double t = ex[i];
    if (t <= 0.0) continue;
    const double v = static_cast<double>(i + 1) / m + std::exp(-t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return best_t / static_cast<double>(q.n);
}

MCEstimate mc_achievability_epsilon(const AchievabilityQuery& q) {
  if (!(q.theta > 0.0)) throw DomainError("mc_achievability_epsilon: theta must be positive");
  const ShellMixtureSampler sampler(q);
  const double dn = static_cast<double>(q.n);
  const double slack = dn * q.theta;
  MCEstimate est = batched_estimate(q.mc, [&](RngStream& rng) { return sampler.excess(rng) <= slack ? 1.0 : 0.0; });
  est.mean = std::min(1.0, est.mean + std::exp(-slack));
  return est;
}

double analytic_achievability_curve(const ChannelSpec& ch, const AchievabilityQuery& q, double kappa_prime) {
  const std::vector<double> costs = shell_costs(q);
  const double cprime = capacity_derivative(ch);
  const double dn = static_cast<double>(q.n);
  KahanSum acc;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    const double sv = std::sqrt(dispersion(ChannelSpec::make(ch.noise_variance, costs[j])));
    const double arg = -cprime * q.mixture.atoms[j] / sv + q.r / sv + kappa_prime / std::sqrt(dn * sv * sv);
    acc.add(q.mixture.weights[j] * std_normal_cdf(arg));
  }
  return std::clamp(acc.value(), 0.0, 1.0);
}

double delta_n_shell_tail(const ChannelSpec& ch, const ShellSpec& shell, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta_n_shell_tail: delta must be positive");
  const double n = static_cast<double>(shell.blocklength);
  const double nv = ch.noise_variance;
  const double var = 4.0 * n * nv * shell.shell_cost + 2.0 * n * nv * nv;
  return var / ((n * delta) * (n * delta));
}

TailAuditReport tail_concentration_audit(const ConstraintSet& cs, const std::vector<std::int64_t>& n_list) {
  if (!cs.condition2_holds()) {
    throw UnboundedSupportError("tail audit needs a constraint that diverges upward");
  }
  double flat = std::numeric_limits<double>::infinity();
  for (const auto& item : cs.items()) {
    if (item.function.bounded_left()) flat = std::min(flat, item.function.flat_left_point());
  }
  flat = std::min(flat, 0.0);

  TailAuditReport rep;
  for (std::int64_t n : n_list) {
    if (n < 1) throw DomainError("tail audit: n must be positive");
    const double u = std::pow(static_cast<double>(n), 1.0 / 6.0);
    // The compensating atom sits as close to zero as the mean row allows, and
    // below every flat point so the one-sided costs vanish there.
    auto feasible = [&](double m) {
      const double v = std::min(-m * u / (1.0 - m), flat);
      DiscreteDistribution d{{v, u}, {1.0 - m, m}};
      return check_membership_U(d, cs, 0.0);
    };
    double lo = 0.0;
    double hi = 1.0 - 1e-12;
    if (feasible(hi)) {
      lo = hi;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
      }
    }
    double markov = 1.0;
    for (const auto& item : cs.items()) {
      const double fu = item.function(u);
      if (fu > 0.0) markov = std::min(markov, item.budget / fu);
    }
    rep.n.push_back(n);
    rep.excursion.push_back(u);
    rep.sup_mass.push_back(lo);
    rep.markov_bound.push_back(markov);
  }
  rep.nonincreasing = true;
  rep.within_markov = true;
  for (std::size_t i = 0; i < rep.sup_mass.size(); ++i) {
    if (i > 0 && rep.sup_mass[i] > rep.sup_mass[i - 1] + 1e-12) rep.nonincreasing = false;
    if (rep.sup_mass[i] > rep.markov_bound[i] + 1e-12) rep.within_markov = false;
  }
  return rep;
}

}  // namespace mpc
