#include "mpc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "mpc/errors.hpp"
#include "mpc/search.hpp"

namespace mpc::oracle {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

// erfc(x) for x >= 3 from the continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
double erfc_continued_fraction(double x) {
  double tail = x;
  for (int k = 300; k >= 1; --k) tail = x + 0.5 * k / tail;
  return std::exp(-x * x) * kInvSqrtPi / tail;
}

// erf(x) = (2/√π) e^{−x²} Σ 2^k x^{2k+1} / (1·3·…·(2k+1)); every term is positive.
double erf_positive_series(double x) {
  long double term = x;
  long double sum = term;
  const long double x2 = static_cast<long double>(x) * x;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0L * x2 / (2.0L * k + 1.0L);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return static_cast<double>(2.0L * kInvSqrtPi * std::exp(-x2) * sum);
}

// One-dimensional concave maximization with bracket growth. `lower_zero`
// restricts the variable to [0, ∞).
double maximize_concave(const std::function<double(double)>& fn, bool lower_zero, double& arg) {
  double span = 1.0;
  ScalarMin best{0.0, 0.0};
  for (int grow = 0; grow < 14; ++grow) {
    const double a = lower_zero ? 0.0 : -span;
    best = golden_section_minimize([&](double x) { return -fn(x); }, a, span, 70);
    const bool at_upper = best.x > span * 0.98;
    const bool at_lower = !lower_zero && best.x < -span * 0.98;
    if (!at_upper && !at_lower) break;
    span *= 4.0;
  }
  arg = best.x;
  return -best.value;
}

}  // namespace

double erf_reference(double x) {
  if (x < 0.0) return -erf_reference(-x);
  if (x < 3.0) return erf_positive_series(x);
  return 1.0 - erfc_continued_fraction(x);
}

double normal_cdf_reference(double x) {
  const double t = x / std::numbers::sqrt2;
  if (t <= -3.0) return 0.5 * erfc_continued_fraction(-t);
  if (t >= 3.0) return 1.0 - 0.5 * erfc_continued_fraction(t);
  return 0.5 * (1.0 + erf_reference(t));
}

double normal_quantile_bisection(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile oracle needs p in (0,1)");
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf_reference(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double log_gamma_stirling(double x) {
  if (!(x > 0.0)) throw DomainError("Stirling oracle needs x > 0");
  long double shift = 0.0L;
  long double z = x;
  while (z < 20.0L) {
    shift += std::log(z);
    z += 1.0L;
  }
  static constexpr long double kB[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6};
  long double series = 0.0L;
  long double zpow = z;
  for (int k = 1; k <= 7; ++k) {
    series += kB[k - 1] / (2.0L * k * (2.0L * k - 1.0L) * zpow);
    zpow *= z * z;
  }
  const long double value = (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) + series;
  return static_cast<double>(value - shift);
}

double log_bessel_i_reference(double nu, double x) {
  const long double v = boost::math::cyl_bessel_i(static_cast<long double>(nu), static_cast<long double>(x));
  return static_cast<double>(std::log(v));
}

Quadrature gauss_hermite(int points) {
  if (points < 1) throw DomainError("gauss_hermite needs at least one point");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  Quadrature q;
  for (int i = 0; i < points; ++i) {
    q.nodes.push_back(eig.eigenvalues()(i));
    const double v0 = eig.eigenvectors()(0, i);
    q.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return q;
}

double qcc_radial_mass(const ChannelSpec& ch, std::int64_t n, double shell_cost) {
  const ShellSpec shell = ShellSpec::make(n, shell_cost);
  const double dn = static_cast<double>(n);
  const double nv = ch.noise_variance;
  const double log_area = std::log(2.0) + 0.5 * dn * std::log(std::numbers::pi) - std::lgamma(0.5 * dn);
  const double centre = std::sqrt(dn * (shell_cost + nv));
  const double spread = std::sqrt(4.0 * dn * nv * shell_cost + 2.0 * dn * nv * nv) / (2.0 * centre);
  const double a = std::max(1e-9, centre - 16.0 * spread);
  const double b = centre + 16.0 * spread;
  auto integrand = [&](double rho) {
    return std::exp(qcc_log_density(shell, ch, rho) + log_area + (dn - 1.0) * std::log(rho));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 20, 1e-13);
}

double qcc_planar_convolution(const ChannelSpec& ch, double radius, double y_norm) {
  const double nv = ch.noise_variance;
  const int m = 4096;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * std::numbers::pi * i / m;
    const double dx = y_norm - radius * std::cos(t);
    const double dy = radius * std::sin(t);
    acc += std::exp(-(dx * dx + dy * dy) / (2.0 * nv));
  }
  return acc / m / (2.0 * std::numbers::pi * nv);
}

std::vector<double> direct_log_ratio_samples(const ChannelSpec& ch, std::int64_t n, double s, std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = static_cast<std::size_t>(n);
  const double nv = ch.noise_variance;
  const double out_var = ch.cost_threshold + nv;
  const double radius = std::sqrt(static_cast<double>(n) * s);
  std::vector<double> dir(dim);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double norm2 = 0.0;
    for (auto& d : dir) {
      d = normal(gen);
      norm2 += d * d;
    }
    const double scale = radius / std::sqrt(norm2);
    double log_w = 0.0;
    double log_q = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double z = std::sqrt(nv) * normal(gen);
      const double y = scale * dir[i] + z;
      log_w += -0.5 * std::log(2.0 * std::numbers::pi * nv) - z * z / (2.0 * nv);
      log_q += -0.5 * std::log(2.0 * std::numbers::pi * out_var) - y * y / (2.0 * out_var);
    }
    out.push_back(log_w - log_q);
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_99(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.6276 * std::sqrt((dn + dm) / (dn * dm));
}

double grid_lp_dual(const std::vector<double>& phi, const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& rhs, const std::vector<bool>& equality) {
  const std::size_t d = rows.size();
  if (d < 1 || d > 2 || rhs.size() != d || equality.size() != d) {
    throw DomainError("grid_lp_dual handles one or two constraint rows");
  }
  const std::size_t m = phi.size();
  auto lagrangian = [&](double l0, double l1) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double v = phi[j] + l0 * (rows[0][j] - rhs[0]);
      if (d == 2) v += l1 * (rows[1][j] - rhs[1]);
      best = std::min(best, v);
    }
    return best;
  };
  double arg = 0.0;
  if (d == 1) return maximize_concave([&](double l0) { return lagrangian(l0, 0.0); }, !equality[0], arg);
  auto inner = [&](double l1) {
    double a0 = 0.0;
    return maximize_concave([&](double l0) { return lagrangian(l0, l1); }, !equality[0], a0);
  };
  return maximize_concave(inner, !equality[1], arg);
}

double pi_reformulation_limit(double mu, double sigma2) {
  if (!(sigma2 >= 0.0)) throw DomainError("pi_reformulation_limit needs sigma2 >= 0");
  const double half_width = std::max(30.0, std::abs(mu) + 30.0 * std::sqrt(sigma2));
  const int points = 12001;
  std::vector<double> phi(points);
  std::vector<double> first(points);
  std::vector<double> second(points);
  for (int i = 0; i < points; ++i) {
    const double p = mu - half_width + 2.0 * half_width * i / (points - 1);
    phi[i] = normal_cdf_reference(p);
    first[i] = p;
    second[i] = p * p;
  }
  return grid_lp_dual(phi, {first, second}, {mu, mu * mu + sigma2}, {true, false});
}

}  // namespace mpc::oracle
