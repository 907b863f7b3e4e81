#include "mpc/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "mpc/errors.hpp"

namespace mpc {

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: x must be positive and finite, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

BesselRegime BesselRegime::make(double nu, double z, double floor) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("BesselRegime: z must be positive and finite");
  }
  if (!(nu >= floor)) {
    throw RegimeError("uniform Bessel expansion requested at order " + std::to_string(nu) +
                      " below floor " + std::to_string(floor) + "; use the series evaluator");
  }
  return BesselRegime{nu, z};
}

double BesselRegime::eta() const {
  const double root = std::sqrt(1.0 + z * z);
  return root + std::log(z / (1.0 + root));
}

namespace {

// Debye polynomials u_1..u_4 in t = 1/√(1+z²).
double debye_correction(double nu, double t) {
  const double t2 = t * t;
  const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
  const double u2 = t2 * (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
  const double u3 =
      t * t2 * (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) / 414720.0;
  const double u4 =
      t2 * t2 *
      (4465125.0 +
       t2 * (-94121676.0 + t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0)))) /
      39813120.0;
  const double inv = 1.0 / nu;
  return std::log1p(inv * (u1 + inv * (u2 + inv * (u3 + inv * u4))));
}

}  // namespace

double log_bessel_i_uniform(double nu, double z, double floor) {
  const BesselRegime regime = BesselRegime::make(nu, z, floor);
  const double one_z2 = 1.0 + z * z;
  const double t = 1.0 / std::sqrt(one_z2);
  return nu * regime.eta() - 0.5 * std::log(2.0 * std::numbers::pi * nu) -
         0.25 * std::log(one_z2) + debye_correction(nu, t);
}

double log_bessel_i_series(double nu, double x) {
  if (!(nu >= 0.0)) throw DomainError("log_bessel_i_series: order must be nonnegative");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_bessel_i_series: argument must be positive and finite");
  }
  using real = long double;
  const real q = static_cast<real>(x) * static_cast<real>(x) / 4.0L;
  const real rescale = 1e300L;
  const real log_rescale = std::log(rescale);
  real term = 1.0L;
  real sum = 1.0L;
  real offset = 0.0L;
  for (long k = 1;; ++k) {
    const real ratio = q / (static_cast<real>(k) * (static_cast<real>(k) + nu));
    term *= ratio;
    sum += term;
    if (sum > rescale) {
      sum /= rescale;
      term /= rescale;
      offset += log_rescale;
    }
    if (ratio < 1.0L && term < sum * 1e-21L) break;
  }
  const real log_sum = std::log(sum) + offset;
  return static_cast<double>(static_cast<real>(nu) * std::log(static_cast<real>(x) / 2.0L) -
                             std::lgamma(static_cast<real>(nu) + 1.0L) + log_sum);
}

double log_bessel_i(double nu, double x) {
  if (nu >= kBesselUniformFloor) return log_bessel_i_uniform(nu, x / nu);
  return log_bessel_i_series(nu, x);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x6d7063u};
  engine_.seed(seq);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::chi_squared(std::uint64_t dof) {
  if (dof == 0) return 0.0;
  std::gamma_distribution<double> gamma(0.5 * static_cast<double>(dof), 2.0);
  return gamma(engine_);
}

double sample_noncentral_chisq(std::uint64_t dof, double lambda, RngStream& rng) {
  if (dof == 0) throw DomainError("sample_noncentral_chisq: dof must be at least 1");
  if (!(lambda >= 0.0)) throw DomainError("sample_noncentral_chisq: lambda must be nonnegative");
  const double shifted = rng.normal() + std::sqrt(lambda);
  return rng.chi_squared(dof - 1) + shifted * shifted;
}

}  // namespace mpc
