#include "steinshape/reflected_bm.hpp"

#include <cmath>
#include <random>

#include "steinshape/error.hpp"

namespace steinshape {

Eigen::Vector2d reflect_to_disk(const StarDomain& domain, const Eigen::Vector2d& x) {
  const double nx = x.squaredNorm();
  if (nx <= 1.0) return x;
  const Eigen::Vector2d nu = domain.normal(std::atan2(x.y(), x.x()));
  // smallest positive s with |x - s nu| = 1
  const double b = x.dot(nu);
  const double disc = b * b - (nx - 1.0);
  if (!(b > 0.0) || !(disc >= 0.0))
    throw Error(ErrorCode::ReflectionFailed, "no positive pull-back root along the reflection field");
  const double s = (nx - 1.0) / (b + std::sqrt(disc));
  Eigen::Vector2d y = x - s * nu;
  while (y.squaredNorm() > 1.0) y *= 1.0 - 1e-16;
  return y;
}

PathStats simulate(const StarDomain& domain, const PathConfig& cfg,
                   const std::function<void(const Eigen::Vector2d&)>& observer, NoiseSource noise) {
  if (!(cfg.dt > 0.0 && cfg.dt <= 1e-3)) throw Error(ErrorCode::InputError, "time step must lie in (0, 1e-3]");
  if (!(cfg.horizon > 0.0)) throw Error(ErrorCode::InputError, "horizon must be positive");
  if (!(cfg.burn_in >= 1.0)) throw Error(ErrorCode::InputError, "burn-in must be at least 1");
  if (!(cfg.x0.norm() < 1.0)) throw Error(ErrorCode::InputError, "start point must lie inside the unit disk");
  if (!(star_kappa(domain) > 0.0)) throw Error(ErrorCode::NotOblique, "domain is not strictly star-shaped");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (!noise) noise = [&] { return Eigen::Vector2d(normal(rng), normal(rng)); };

  const long burn = static_cast<long>(std::llround(cfg.burn_in / cfg.dt));
  const long total = burn + static_cast<long>(std::llround(cfg.horizon / cfg.dt));
  const double sdt = std::sqrt(cfg.dt);
  PathStats st;
  Eigen::Vector2d x = cfg.x0;
  for (long k = 0; k < total; ++k) {
    x += sdt * noise();
    if (x.squaredNorm() > 1.0) {
      x = reflect_to_disk(domain, x);
      if (k >= burn) ++st.reflections;
    }
    st.max_radius = std::max(st.max_radius, x.norm());
    if (k >= burn && observer) observer(x);
  }
  st.steps = total - burn;
  st.endpoint = x;
  return st;
}

OccupationEstimate stationary_mean(const StarDomain& domain, const RhsExpansion& h, const PathConfig& cfg) {
  const ZField hf = h.field();
  constexpr int kBatches = 20;
  const long n = static_cast<long>(std::llround(cfg.horizon / cfg.dt));
  const long per = n / kBatches;
  if (per < 1) throw Error(ErrorCode::InputError, "horizon too short for 20 batches");
  std::vector<double> sums(kBatches, 0.0);
  long idx = 0;
  const PathStats st = simulate(domain, cfg, [&](const Eigen::Vector2d& p) {
    const long b = idx / per;
    if (b < kBatches) sums[b] += hf.value(p);
    ++idx;
  });
  OccupationEstimate est;
  est.samples = per * kBatches;
  double mean = 0.0;
  for (double& s : sums) {
    s /= per;
    mean += s;
  }
  mean /= kBatches;
  double var = 0.0;
  for (double s : sums) var += (s - mean) * (s - mean);
  var /= (kBatches - 1);
  est.mean = mean;
  est.std_error = std::sqrt(var / kBatches);
  est.reflected_fraction = static_cast<double>(st.reflections) / st.steps;
  return est;
}

FeynmanKacReport feynman_kac_check(const StarDomain& domain, const RhsExpansion& h, const ObliqueSolution& solution,
                                   const PathConfig& cfg) {
  if (!(solution.boundary_residual <= 1e-6) || !(solution.interior_residual <= 1e-6))
    throw Error(ErrorCode::ResidualTooLarge, "oblique solution is outside its residual gates");
  FeynmanKacReport rep;
  rep.c_star = solution.c_star;
  rep.mean_h = solution.mean_h;
  if (h.radial.size() <= 1 && h.cos_part.empty() && h.sin_part.empty()) {
    // constant data: every path average equals the constant
    const double c = h.radial.empty() ? 0.0 : h.radial[0];
    rep.occupation_mean = c;
    rep.z_score = std::abs(c - rep.c_star) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.agree = rep.z_score == 0.0;
    return rep;
  }
  const OccupationEstimate est = stationary_mean(domain, h, cfg);
  rep.occupation_mean = est.mean;
  rep.std_error = est.std_error;
  rep.z_score = (est.mean - rep.c_star) / est.std_error;
  rep.agree = std::abs(rep.z_score) <= 3.0;
  return rep;
}

}  // namespace steinshape
