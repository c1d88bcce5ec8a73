#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "steinshape/star_domain.hpp"
#include "steinshape/zfield.hpp"

namespace steinshape {

/// Data h over the dictionary {r^k cos k theta, r^k sin k theta, r^(2j)}.
struct RhsExpansion {
  std::vector<double> radial;    // coefficient of r^(2j), j = 0..
  std::vector<double> cos_part;  // coefficient of r^k cos k theta, k = 1..
  std::vector<double> sin_part;  // coefficient of r^k sin k theta, k = 1..

  static RhsExpansion constant(double c);
  static RhsExpansion x1();
  static RhsExpansion x2();
  static RhsExpansion r_squared();
  /// x1^2 - x2^2 = r^2 cos 2 theta
  static RhsExpansion quadrupole();
  static RhsExpansion cos_mode(int k, double coeff = 1.0);
  static RhsExpansion sin_mode(int k, double coeff = 1.0);
  static RhsExpansion radial_mode(int j, double coeff = 1.0);

  RhsExpansion operator+(const RhsExpansion& other) const;
  RhsExpansion scaled(double s) const;

  double value(const Eigen::Vector2d& p) const;
  ZField field() const;
  /// A field whose Laplacian is h.
  ZField particular() const;
  /// Largest harmonic degree present (0 if only radial terms).
  int harmonic_degree() const;
  /// Largest polynomial degree present.
  int degree() const;
  bool is_zero() const;
};

struct ObliqueSolution {
  /// Particular preimage of h (not including the -c r^2/4 term).
  ZField particular;
  double a0 = 0.0;
  std::vector<double> a;  // harmonic correction r^k cos k theta
  std::vector<double> b;  // harmonic correction r^k sin k theta
  int truncation = 0;

  double c_star = 0.0;
  double mean_h = 0.0;  // (1/|Omega|) integral of h over Omega
  double interior_residual = 0.0;
  double boundary_residual = 0.0;
  double divergence = 0.0;  // integral over B_1 of Laplacian f
  double condition = 0.0;
  bool reliable = true;

  /// Full f on the closed unit disk.
  std::function<FieldJet(const Eigen::Vector2d&)> evaluate;
};

struct ObliqueOptions {
  int truncation = 32;  // K_f
  int collocation = 256;  // M
  int interior = 128;  // M_int, kernel variant only
};

/// Solves Lap f = h - c in B_1, grad f . nu_Omega = 0 on the unit circle,
/// with integral of f over B_1 equal to zero. Throws NotOblique, IllConditioned.
ObliqueSolution solve_oblique(const StarDomain& domain, const RhsExpansion& h, const ObliqueOptions& opt = {});

/// Solves R^2 tr(D^2 f (D psi)^{-1}) = h - c in B_1 with grad f . psi = 0 on
/// the unit circle. The ansatz is a sum of separated solutions r^lambda Phi(theta)
/// of the homogeneous operator plus particular solutions of the same form.
/// Throws NotElliptic, IllConditioned. `reliable` is set by the residual gate.
ObliqueSolution solve_oblique_kernel_variant(const StarDomain& domain, const RhsExpansion& h,
                                             const ObliqueOptions& opt = {});

/// Smallest eigenvalue of the symmetric part of D psi over a probe grid.
double ellipticity_margin(const StarDomain& domain, int n_theta = 512);

struct SchauderStats {
  std::vector<double> ratios;
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
};

/// ||D^2 f||_{C^alpha} / ||h||_{C^alpha} for each probe, both estimated on a
/// fixed point cloud in the closed unit disk.
SchauderStats schauder_probe(const StarDomain& domain, const std::vector<RhsExpansion>& probes, double alpha,
                             const ObliqueOptions& opt = {});

/// Integral over B_1 of Lap f as the boundary flux. Throws ResidualTooLarge if
/// the boundary residual exceeds 1e-6.
double divergence_functional(const ObliqueSolution& solution);

/// Point cloud used by schauder_probe: Cartesian grid of spacing h clipped to the closed disk.
std::vector<Eigen::Vector2d> disk_point_cloud(double spacing);

}  // namespace steinshape
