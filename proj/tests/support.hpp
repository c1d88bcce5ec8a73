#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "steinshape/quadrature.hpp"
#include "steinshape/star_domain.hpp"

namespace testsupport {

/// Random radius with Fourier modes 1..order and l1 coefficient norm `budget`.
inline steinshape::StarDomain random_domain(std::mt19937_64& rng, double budget = 0.2, int order = 5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(order), b(order);
  double l1 = 0.0;
  for (int k = 0; k < order; ++k) {
    a[k] = u(rng) / (k + 1);
    b[k] = u(rng) / (k + 1);
    l1 += std::abs(a[k]) + std::abs(b[k]);
  }
  const double s = budget * std::uniform_real_distribution<double>(0.2, 1.0)(rng) / l1;
  for (int k = 0; k < order; ++k) {
    a[k] *= s;
    b[k] *= s;
  }
  return steinshape::StarDomain(1.0, a, b, "random");
}

/// Unit circle centred at (c, 0), written in polar form about the origin and
/// truncated at `order` Fourier modes.
inline steinshape::StarDomain shifted_circle(double c, int order = 40) {
  const int n = 4 * order + 4;
  std::vector<double> a(order, 0.0);
  double a0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = steinshape::kTwoPi * i / n;
    const double r = c * std::cos(t) + std::sqrt(1.0 - c * c * std::sin(t) * std::sin(t));
    a0 += r / n;
    for (int k = 1; k <= order; ++k) a[k - 1] += 2.0 * r * std::cos(k * t) / n;
  }
  return steinshape::StarDomain(a0, a, {}, "shifted circle");
}

}  // namespace testsupport
