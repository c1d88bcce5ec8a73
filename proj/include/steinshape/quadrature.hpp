#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace steinshape {

class StarDomain;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre_unit(int n);

/// Uniform periodic angles 2*pi*i/m, i = 0..m-1.
std::vector<double> periodic_grid(int m);

/// Repeatedly doubles the grid size until every component of the returned
/// vector agrees with the previous level to `rel_tol` (relative to the
/// largest component magnitude, with `abs_floor` as a floor). Throws
/// NoConvergence past `m_max`.
struct DoublingResult {
  Eigen::VectorXd values;
  int grid_size = 0;
};

DoublingResult converge_by_doubling(const std::function<Eigen::VectorXd(int)>& integrals, int m_start,
                                    double rel_tol, int m_max, double abs_floor = 1e-300);

/// Integral over [0, 2 pi) of a vector-valued periodic function using
/// composite Gauss-Legendre panels that start and end at the given break
/// angles (where the integrand may have kinks). Panels are halved until
/// successive values agree to rel_tol; throws NoConvergence past max_evals.
Eigen::VectorXd integrate_piecewise(const std::function<Eigen::VectorXd(double)>& f, std::vector<double> breaks,
                                    double rel_tol, int max_evals = 1 << 18);

/// Tensor quadrature over a star-shaped region: uniform angles times Gauss
/// radial nodes scaled by R(theta), with the polar Jacobian folded into the
/// weights.
struct BulkQuadrature {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double integrate(const std::function<double(const Eigen::Vector2d&)>& f) const;
};

BulkQuadrature polar_bulk_quadrature(const StarDomain& domain, int n_theta, int n_radial);
BulkQuadrature disk_quadrature(double radius, int n_theta, int n_radial);

}  // namespace steinshape
