#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace mpc {

// Standard normal distribution.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Inverse of std_normal_cdf. Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// log Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Order below which the uniform large-order Bessel expansion is not used.
inline constexpr double kBesselUniformFloor = 25.0;

/// Order/argument pair (ν, z) for I_ν(νz) in the large-order regime.
struct BesselRegime {
  double nu;
  double z;

  /// Validates nu >= floor and z > 0; throws RegimeError / DomainError.
  static BesselRegime make(double nu, double z, double floor = kBesselUniformFloor);

  /// η = √(1+z²) + log(z / (1 + √(1+z²))).
  double eta() const;
};

/// log I_ν(νz) from the uniform asymptotic (Debye) expansion with four
/// correction terms. Throws RegimeError when nu < floor.
double log_bessel_i_uniform(double nu, double z, double floor = kBesselUniformFloor);

/// log I_ν(x) by the ascending power series summed in log space in extended
/// precision. Valid for any ν >= 0, x > 0; cost grows linearly with x.
double log_bessel_i_series(double nu, double x);

/// log I_ν(x): series below kBesselUniformFloor, uniform expansion above.
double log_bessel_i(double nu, double x);

/// log Σ exp(v_i), stable for large magnitudes. Returns -inf for an empty span.
double log_sum_exp(std::span<const double> values);

/// Compensated summation.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Reproducible random stream. The engine is a 64-bit Mersenne twister whose
/// state is expanded from (seed, stream_id) through std::seed_seq, so distinct
/// stream ids give unrelated state vectors. One stream per worker; not shared.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal();
  double uniform();
  /// Central chi-square with `dof` degrees of freedom (dof may be 0).
  double chi_squared(std::uint64_t dof);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// One draw of χ²_dof(λ): central χ²_{dof-1} plus (Z + √λ)².
double sample_noncentral_chisq(std::uint64_t dof, double lambda, RngStream& rng);

}  // namespace mpc
