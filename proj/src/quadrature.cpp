#include "steinshape/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "steinshape/error.hpp"
#include "steinshape/star_domain.hpp"

namespace steinshape {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre_unit(int n) {
  if (n < 1) throw Error(ErrorCode::InputError, "Gauss rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<double> periodic_grid(int m) {
  std::vector<double> theta(m);
  for (int i = 0; i < m; ++i) theta[i] = kTwoPi * i / m;
  return theta;
}

DoublingResult converge_by_doubling(const std::function<Eigen::VectorXd(int)>& integrals, int m_start,
                                    double rel_tol, int m_max, double abs_floor) {
  int m = m_start;
  Eigen::VectorXd prev = integrals(m);
  while (2 * m <= m_max) {
    m *= 2;
    Eigen::VectorXd cur = integrals(m);
    const double scale = std::max(cur.cwiseAbs().maxCoeff(), abs_floor);
    if ((cur - prev).cwiseAbs().maxCoeff() <= rel_tol * scale) return {cur, m};
    prev = std::move(cur);
  }
  throw Error(ErrorCode::NoConvergence, "quadrature did not reach relative agreement " +
                                            std::to_string(rel_tol) + " by grid size " +
                                            std::to_string(m_max));
}

Eigen::VectorXd integrate_piecewise(const std::function<Eigen::VectorXd(double)>& f, std::vector<double> breaks,
                                    double rel_tol, int max_evals) {
  constexpr int kNodes = 16;
  const GaussRule rule = gauss_legendre_unit(kNodes);
  for (double& b : breaks) b = std::fmod(std::fmod(b, kTwoPi) + kTwoPi, kTwoPi);
  std::sort(breaks.begin(), breaks.end());
  if (breaks.empty()) breaks.push_back(0.0);
  const std::size_t nb = breaks.size();
  auto level = [&](int sub) {
    Eigen::VectorXd acc;
    for (std::size_t s = 0; s < nb; ++s) {
      const double lo = breaks[s];
      const double hi = s + 1 < nb ? breaks[s + 1] : breaks[0] + kTwoPi;
      const double w = (hi - lo) / sub;
      for (int p = 0; p < sub; ++p)
        for (int q = 0; q < kNodes; ++q) {
          Eigen::VectorXd v = f(lo + w * (p + rule.nodes[q])) * (w * rule.weights[q]);
          if (acc.size() == 0) acc = Eigen::VectorXd::Zero(v.size());
          acc += v;
        }
    }
    return acc;
  };
  int sub = std::max(1, 32 / static_cast<int>(nb));
  Eigen::VectorXd prev = level(sub);
  while (2L * sub * static_cast<long>(nb) * kNodes <= max_evals) {
    sub *= 2;
    Eigen::VectorXd cur = level(sub);
    const double scale = std::max(cur.cwiseAbs().maxCoeff(), 1e-300);
    if ((cur - prev).cwiseAbs().maxCoeff() <= rel_tol * scale) return cur;
    prev = std::move(cur);
  }
  throw Error(ErrorCode::NoConvergence, "piecewise quadrature did not converge");
}

double BulkQuadrature::integrate(const std::function<double(const Eigen::Vector2d&)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * f(points[i]);
  return acc;
}

namespace {

template <class RadiusFn>
BulkQuadrature polar_tensor(RadiusFn radius, int n_theta, int n_radial) {
  const GaussRule rule = gauss_legendre_unit(n_radial);
  BulkQuadrature q;
  q.points.reserve(static_cast<std::size_t>(n_theta) * n_radial);
  q.weights.reserve(static_cast<std::size_t>(n_theta) * n_radial);
  const double dtheta = kTwoPi / n_theta;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = dtheta * j;
    const double r_max = radius(theta);
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    for (int i = 0; i < n_radial; ++i) {
      const double r = r_max * rule.nodes[i];
      q.points.push_back(r * dir);
      q.weights.push_back(dtheta * rule.weights[i] * r_max * r);
    }
  }
  return q;
}

}  // namespace

BulkQuadrature polar_bulk_quadrature(const StarDomain& domain, int n_theta, int n_radial) {
  return polar_tensor([&](double t) { return domain.radius(t); }, n_theta, n_radial);
}

BulkQuadrature disk_quadrature(double radius, int n_theta, int n_radial) {
  return polar_tensor([radius](double) { return radius; }, n_theta, n_radial);
}

}  // namespace steinshape
