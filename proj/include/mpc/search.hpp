#pragma once

#include <cmath>
#include <utility>

namespace mpc {

struct ScalarMin {
  double x;
  double value;
};

/// Golden-section search for a minimum of `fn` on [a, b]. The endpoints are
/// evaluated too, so a monotone or discontinuous fn still yields the best
/// point seen rather than an interior guess.
template <class Fn>
ScalarMin golden_section_minimize(Fn&& fn, double a, double b, int iterations = 60) {
  constexpr double kInvPhi = 0.6180339887498949;
  ScalarMin best{a, fn(a)};
  if (!(b > a)) return best;
  const double fb = fn(b);
  if (fb < best.value) best = {b, fb};

  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = fn(x2);
    }
  }
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

}  // namespace mpc
