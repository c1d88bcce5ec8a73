#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "steinshape/oblique_pde.hpp"
#include "steinshape/star_domain.hpp"

namespace steinshape {

struct PathConfig {
  double dt = 1e-4;
  double horizon = 500.0;  // T, measured after burn-in
  double burn_in = 1.0;    // T0
  std::uint64_t seed = 1;
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
};

/// Source of standard normal pairs. Empty means the seeded default generator.
using NoiseSource = std::function<Eigen::Vector2d()>;

struct PathStats {
  long steps = 0;
  long reflections = 0;
  Eigen::Vector2d endpoint = Eigen::Vector2d::Zero();
  double max_radius = 0.0;  // largest |X| after any step
};

/// Euler-Maruyama in the unit disk; exits are pulled back along
/// -nu_Omega(X/|X|) onto the circle. `observer` sees every post-burn-in
/// position. Throws InputError, NotOblique, ReflectionFailed.
PathStats simulate(const StarDomain& domain, const PathConfig& config,
                   const std::function<void(const Eigen::Vector2d&)>& observer = {}, NoiseSource noise = {});

/// One reflection step; exposed for tests. Returns the pulled-back point.
Eigen::Vector2d reflect_to_disk(const StarDomain& domain, const Eigen::Vector2d& x);

struct OccupationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double reflected_fraction = 0.0;
  int batches = 20;
  long samples = 0;
};

/// Time average of h along the path after burn-in; standard error from 20 batch means.
OccupationEstimate stationary_mean(const StarDomain& domain, const RhsExpansion& h, const PathConfig& config);

struct FeynmanKacReport {
  double occupation_mean = 0.0;
  double std_error = 0.0;
  double c_star = 0.0;
  double mean_h = 0.0;
  double z_score = 0.0;  // (occupation - c_star) / std_error, 0 when both agree exactly
  bool agree = false;    // |z| <= 3
};

/// Compares the stationary average of h with the compatibility constant of
/// the oblique solve. Throws ResidualTooLarge if the solve is not within its gates.
FeynmanKacReport feynman_kac_check(const StarDomain& domain, const RhsExpansion& h, const ObliqueSolution& solution,
                                   const PathConfig& config);

}  // namespace steinshape
