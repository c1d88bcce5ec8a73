#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steinshape/star_domain.hpp"

namespace steinshape {

struct FraenkelResult {
  double value = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;  // |B_r| = |Omega|
  int grid = 0;
  int iterations = 0;
};

/// |Omega delta B_r(c)| / |B_r| on an N x N raster with 8 x 8 subsamples per
/// cell. With search on, c is optimized by Nelder-Mead from the boundary
/// barycenter; otherwise c = 0. Throws GridTooCoarse (N < 128), NoConvergence.
FraenkelResult fraenkel_asymmetry(const StarDomain& domain, int n = 512, bool search = true);

/// Polar formula (1/2) integral |R^2 - r^2| / (pi r^2) for a center at the origin.
double fraenkel_polar(const StarDomain& domain);

/// Integral of |1_{B_1} - (|B_1|/|Omega|) 1_Omega| by rasterization.
double zolotarev_tv(const StarDomain& domain, int n = 512);

/// Rasterized |Omega delta B_1|.
double symmetric_difference_unit_ball(const StarDomain& domain, int n = 512);

/// (integral over dOmega of |nu - (x - y)/|x - y||^2)^(1/2)
double oscillation_index(const StarDomain& domain, const Eigen::Vector2d& y, int m = 4096);

struct ZolotarevEstimate {
  double alpha = 1.0;
  double lower_bound = 0.0;
  std::string argmax;
  std::string method;  // dictionary | lp-oracle | tv
  int resolution = 0;
  std::vector<double> history;
  double discretization_bound = 0.0;  // lp-oracle only
  double best_even = 0.0;  // dictionary only: best even / odd feature values
  double best_odd = 0.0;
};

/// Certified dictionary lower bound of the alpha-Zolotarev distance between
/// Omega and B_1: harmonic and radial polynomial features up to `degree`,
/// clipped affine functions and cusp bumps, each scaled to unit C^alpha norm.
ZolotarevEstimate zolotarev_lower(const StarDomain& domain, double alpha, int degree = 8);

/// LP on a node grid of at most n_nodes cells (n_nodes <= 400). The history
/// holds the values at roughly n_nodes/4 and n_nodes/2.
ZolotarevEstimate zolotarev_oracle(const StarDomain& domain, double alpha, int n_nodes = 200);

}  // namespace steinshape
