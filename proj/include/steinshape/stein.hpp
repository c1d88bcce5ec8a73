#pragma once

#include <vector>

#include <Eigen/Core>

#include "steinshape/star_domain.hpp"
#include "steinshape/zfield.hpp"

namespace steinshape {

struct DeficitReport {
  double d1 = 0.0;         // integral of |theta - R nu_Omega| J over the circle
  double d2 = 0.0;         // integral of |theta - R nu_Omega|^2 J over the circle
  double osc_l1 = 0.0;     // integral over dOmega of |x/|x| - nu|
  double osc_l2 = 0.0;     // integral over dOmega of |x/|x| - nu|^2
  double identity_residual = 0.0;  // |D2 - (|dOmega| - 2d|Omega| + M)|
};

/// Piecewise Gauss quadrature split at the zeros of R', to relative 1e-10.
DeficitReport boundary_deficits(const StarDomain& domain);

struct SteinKernelOptions {
  int truncation = 64;    // K
  int collocation = 512;  // M
  int n_theta = 512;      // bulk quadrature
  int n_radial = 24;
};

struct SteinKernelResult {
  /// g_i = sum_k a[i][k] Re z^k + b[i][k] Im z^k, k = 1..K
  std::vector<double> a[2];
  std::vector<double> b[2];
  ZField potential[2];
  int truncation = 0;

  /// tau = Dg sampled on the bulk quadrature grid
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  std::vector<Eigen::Matrix2d> tau;

  double boundary_residual = 0.0;
  double discrepancy_l1 = 0.0;
  double discrepancy_l2 = 0.0;
  double energy = 0.0;
  double identity_error = 0.0;  // worst relative mismatch on the test panel

  Eigen::Matrix2d tau_at(const Eigen::Vector2d& p) const;
};

/// Neumann problems Lap g_i = 0, dg_i/dnu = x_i with a harmonic Ritz basis.
/// Throws NotCentered if |boundary integral of x| > 1e-8, IdentityViolated
/// if the test-panel identity fails at 1e-6 relative.
SteinKernelResult stein_kernel_solve(const StarDomain& domain, const SteinKernelOptions& opt = {});

/// order 1 or 2. Returns the stored value.
double stein_discrepancy(const SteinKernelResult& result, int order);
/// Recomputes the discrepancy on a fresh polar grid over the domain.
double stein_discrepancy(const SteinKernelResult& result, int order, const StarDomain& domain, int n_theta,
                         int n_radial);

}  // namespace steinshape
