#include "steinshape/star_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steinshape/error.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

namespace {

constexpr double kPi = std::numbers::pi;

double geodesic(double t1, double t2) {
  double d = std::fmod(std::abs(t1 - t2), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

StarDomain::StarDomain(double base_radius, std::vector<double> a, std::vector<double> b, std::string label)
    : base_(base_radius), a_(std::move(a)), b_(std::move(b)), label_(std::move(label)) {
  const std::size_t k = std::max(a_.size(), b_.size());
  a_.resize(k, 0.0);
  b_.resize(k, 0.0);
}

StarDomain StarDomain::cosine_mode(int k, double eps, double base) {
  std::vector<double> a(k, 0.0);
  a[k - 1] = eps;
  return StarDomain(base, std::move(a), std::vector<double>(k, 0.0),
                    "cos" + std::to_string(k) + ":" + std::to_string(eps));
}

// cos/sin of k*theta by repeated rotation
double StarDomain::radius(double theta) const {
  double r = base_;
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double c = c1, s = s1;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    r += a_[k] * c + b_[k] * s;
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
  }
  return r;
}

RadiusJet StarDomain::jet(double theta) const {
  RadiusJet j{base_, 0.0, 0.0};
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double c = c1, s = s1;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double n = k + 1.0;
    j.r += a_[k] * c + b_[k] * s;
    j.dr += n * (-a_[k] * s + b_[k] * c);
    j.ddr += -n * n * (a_[k] * c + b_[k] * s);
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
  }
  return j;
}

Eigen::Vector2d StarDomain::boundary_point(double theta) const {
  return radius(theta) * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

Eigen::Vector2d StarDomain::normal(double theta) const {
  const RadiusJet j = jet(theta);
  const Eigen::Vector2d rhat(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d that(-std::sin(theta), std::cos(theta));
  return (j.r * rhat - j.dr * that) / std::hypot(j.r, j.dr);
}

double StarDomain::jacobian(double theta) const {
  const RadiusJet j = jet(theta);
  return std::hypot(j.r, j.dr);
}

double StarDomain::curvature(double theta) const {
  const RadiusJet j = jet(theta);
  const double q = j.r * j.r + j.dr * j.dr;
  return (j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.ddr) / (q * std::sqrt(q));
}

StarDomain StarDomain::rotated(double phi) const {
  std::vector<double> a(a_.size()), b(b_.size());
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double n = k + 1.0;
    const double c = std::cos(n * phi), s = std::sin(n * phi);
    a[k] = a_[k] * c - b_[k] * s;
    b[k] = a_[k] * s + b_[k] * c;
  }
  return StarDomain(base_, std::move(a), std::move(b), label_);
}

StarDomain StarDomain::scaled(double s) const {
  std::vector<double> a = a_, b = b_;
  for (auto& v : a) v *= s;
  for (auto& v : b) v *= s;
  return StarDomain(base_ * s, std::move(a), std::move(b), label_);
}

bool StarDomain::is_ball() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return v == 0.0; }) &&
         std::all_of(b_.begin(), b_.end(), [](double v) { return v == 0.0; });
}

void validate_domain(const StarDomain& domain) {
  if (!(domain.base_radius() > 0.0) || !std::isfinite(domain.base_radius()))
    throw Error(ErrorCode::NonPositiveRadius, "base radius must be positive and finite");
  for (double v : domain.cos_coeffs())
    if (!std::isfinite(v)) throw Error(ErrorCode::InputError, "non-finite Fourier coefficient");
  for (double v : domain.sin_coeffs())
    if (!std::isfinite(v)) throw Error(ErrorCode::InputError, "non-finite Fourier coefficient");
  const std::vector<double> grid = periodic_grid(kCheckGrid);
  for (double t : grid) {
    const double r = domain.radius(t);
    if (!(r > 0.0))
      throw Error(ErrorCode::NonPositiveRadius, "R(" + std::to_string(t) + ") = " + std::to_string(r));
  }
  if (!(star_kappa(domain, kCheckGrid) > 0.0))
    throw Error(ErrorCode::NotStarShaped, "nu . x/|x| is not positive on the check grid");
}

StarDomain build_domain(const DomainSpec& spec) {
  if (spec.dimension != 2)
    throw Error(ErrorCode::InputError, "only dimension 2 is supported, got " + std::to_string(spec.dimension));
  if (!(spec.base_radius > 0.0)) throw Error(ErrorCode::NonPositiveRadius, "base radius must be positive");
  StarDomain domain(spec.base_radius, spec.fourier_cos, spec.fourier_sin, spec.label);
  validate_domain(domain);
  return apply_normalization(domain, spec.recenter, spec.normalize_volume);
}

std::vector<double> radius_critical_angles(const StarDomain& domain) {
  std::vector<double> roots;
  if (domain.is_ball()) return roots;
  const int m = std::max(1024, 64 * (domain.order() + 1));
  const double h = kTwoPi / m;
  auto dr = [&](double t) { return domain.jet(t).dr; };
  double prev = dr(0.0);
  for (int i = 1; i <= m; ++i) {
    const double t = h * i;
    const double cur = dr(t);
    if (prev == 0.0) {
      roots.push_back(h * (i - 1));
    } else if ((prev < 0.0) != (cur < 0.0) && cur != 0.0) {
      double lo = t - h, hi = t;
      const bool lo_neg = prev < 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((dr(mid) < 0.0) == lo_neg) lo = mid;
        else hi = mid;
      }
      roots.push_back(std::fmod(0.5 * (lo + hi), kTwoPi));
    }
    prev = cur;
  }
  return roots;
}

double BoundaryFrame::dtheta() const { return kTwoPi / static_cast<double>(theta.size()); }

BoundaryFrame boundary_frame(const StarDomain& domain, int m) {
  if (m < 8 || m % 2 != 0) throw Error(ErrorCode::InputError, "boundary grid must be even and >= 8");
  BoundaryFrame f;
  f.theta = periodic_grid(m);
  f.r.resize(m);
  f.dr.resize(m);
  f.points.resize(m);
  f.normals.resize(m);
  f.transported_normals.resize(m);
  f.jacobian.resize(m);
  f.curvature.resize(m);
  for (int i = 0; i < m; ++i) {
    const double t = f.theta[i];
    const RadiusJet j = domain.jet(t);
    const Eigen::Vector2d rhat(std::cos(t), std::sin(t));
    const Eigen::Vector2d that(-std::sin(t), std::cos(t));
    const double q = std::hypot(j.r, j.dr);
    f.r[i] = j.r;
    f.dr[i] = j.dr;
    f.points[i] = j.r * rhat;
    f.normals[i] = (j.r * rhat - j.dr * that) / q;
    f.transported_normals[i] = f.normals[i];
    f.jacobian[i] = q;
    f.curvature[i] = (j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.ddr) / (q * q * q);
  }
  return f;
}

Eigen::Vector2d bulk_map(const StarDomain& domain, const Eigen::Vector2d& p) {
  if (p.squaredNorm() == 0.0) return Eigen::Vector2d::Zero();
  return domain.radius(std::atan2(p.y(), p.x())) * p;
}

Eigen::Vector2d bulk_map_inverse(const StarDomain& domain, const Eigen::Vector2d& x) {
  if (x.squaredNorm() == 0.0) return Eigen::Vector2d::Zero();
  return x / domain.radius(std::atan2(x.y(), x.x()));
}

Eigen::Matrix2d bulk_map_jacobian(const StarDomain& domain, const Eigen::Vector2d& p) {
  const double t = p.squaredNorm() == 0.0 ? 0.0 : std::atan2(p.y(), p.x());
  const RadiusJet j = domain.jet(t);
  const Eigen::Vector2d rhat(std::cos(t), std::sin(t));
  const Eigen::Vector2d that(-std::sin(t), std::cos(t));
  return j.r * Eigen::Matrix2d::Identity() + j.dr * rhat * that.transpose();
}

double star_kappa(const StarDomain& domain, int m) {
  double kappa = 1.0;
  for (double t : periodic_grid(m)) {
    const RadiusJet j = domain.jet(t);
    kappa = std::min(kappa, j.r / std::hypot(j.r, j.dr));
  }
  return kappa;
}

RegularityParams regularity_params(const StarDomain& domain, double alpha, int m) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  if (m < 64) throw Error(ErrorCode::GridTooCoarse, "regularity grid needs at least 64 points");
  const std::vector<double> grid = periodic_grid(m);
  std::vector<double> dr(m);
  RegularityParams p;
  p.alpha = alpha;
  double sup_r = 0.0, sup_dr = 0.0;
  for (int i = 0; i < m; ++i) {
    const RadiusJet j = domain.jet(grid[i]);
    dr[i] = j.dr;
    sup_r = std::max(sup_r, std::abs(j.r - 1.0));
    sup_dr = std::max(sup_dr, std::abs(j.dr));
    p.kappa = std::min(p.kappa, j.r / std::hypot(j.r, j.dr));
    const double q = j.r * j.r + j.dr * j.dr;
    const double curv = (j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.ddr) / (q * std::sqrt(q));
    if (curv < -1e-10) p.convex = false;
  }
  double semi = 0.0;
  for (int i = 0; i < m; ++i)
    for (int k = i + 1; k < m; ++k) {
      const double d = geodesic(grid[i], grid[k]);
      semi = std::max(semi, std::abs(dr[i] - dr[k]) / std::pow(d, alpha));
    }
  p.lambda_est = sup_r + sup_dr + semi;
  return p;
}

GeometricFunctionals geometric_functionals(const StarDomain& domain) {
  auto integrals = [&](int m) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(5);
    const double h = kTwoPi / m;
    for (int i = 0; i < m; ++i) {
      const double t = h * i;
      const RadiusJet j = domain.jet(t);
      const double jac = std::hypot(j.r, j.dr);
      acc[0] += 0.5 * j.r * j.r;
      acc[1] += jac;
      acc[2] += j.r * j.r * jac;
      acc[3] += j.r * std::cos(t) * jac;
      acc[4] += j.r * std::sin(t) * jac;
    }
    return Eigen::VectorXd(acc * h);
  };
  const int m0 = std::max(64, 8 * (domain.order() + 1));
  const DoublingResult res = converge_by_doubling(integrals, m0, 1e-12, 1 << 16);
  GeometricFunctionals g;
  g.volume = res.values[0];
  g.perimeter = res.values[1];
  g.momentum = res.values[2];
  g.barycenter = Eigen::Vector2d(res.values[3], res.values[4]) / g.perimeter;
  g.deficit_perimeter = g.perimeter - kTwoPi;
  g.deficit_momentum = g.momentum - kTwoPi;
  g.grid_size = res.grid_size;
  return g;
}

namespace {

// Distance from c along direction phi to the boundary. Requires exactly one
// crossing; otherwise the domain is not star-shaped about c.
double shoot_ray(const StarDomain& domain, const Eigen::Vector2d& c, double phi, double t_max) {
  const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
  auto F = [&](double t) {
    const Eigen::Vector2d x = c + t * u;
    return x.norm() - domain.radius(std::atan2(x.y(), x.x()));
  };
  constexpr int kScan = 256;
  int crossings = 0;
  double lo = 0.0, hi = 0.0;
  double f_prev = F(0.0);
  if (!(f_prev < 0.0)) throw Error(ErrorCode::RecenterFailed, "new origin lies outside the domain");
  for (int s = 1; s <= kScan; ++s) {
    const double t = t_max * s / kScan;
    const double f = F(t);
    if ((f_prev < 0.0) != (f < 0.0)) {
      ++crossings;
      lo = t_max * (s - 1) / kScan;
      hi = t;
    }
    f_prev = f;
  }
  if (crossings != 1)
    throw Error(ErrorCode::RecenterFailed,
                "ray at angle " + std::to_string(phi) + " crosses the boundary " + std::to_string(crossings) + " times");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

StarDomain recenter(const StarDomain& domain) {
  const GeometricFunctionals g = geometric_functionals(domain);
  const Eigen::Vector2d c = g.barycenter;
  if (c.norm() <= 1e-13 * domain.base_radius()) return domain;

  double r_max = 0.0;
  for (double t : periodic_grid(1024)) r_max = std::max(r_max, domain.radius(t));
  const double t_max = 1.05 * (r_max + c.norm());

  int order = std::max(4, 2 * domain.order());
  constexpr int kMaxOrder = 512;
  while (true) {
    const int n = 4 * order + 4;
    std::vector<double> rho(n);
    const double h = kTwoPi / n;
    for (int i = 0; i < n; ++i) rho[i] = shoot_ray(domain, c, h * i, t_max);
    double base = 0.0;
    std::vector<double> a(order, 0.0), b(order, 0.0);
    for (int i = 0; i < n; ++i) base += rho[i];
    base /= n;
    for (int k = 1; k <= order; ++k) {
      for (int i = 0; i < n; ++i) {
        a[k - 1] += rho[i] * std::cos(k * h * i);
        b[k - 1] += rho[i] * std::sin(k * h * i);
      }
      a[k - 1] *= 2.0 / n;
      b[k - 1] *= 2.0 / n;
    }
    StarDomain fitted(base, std::move(a), std::move(b), domain.label());
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = h * (i + 0.5);
      err = std::max(err, std::abs(fitted.radius(t) - shoot_ray(domain, c, t, t_max)));
    }
    if (err <= 1e-10) {
      validate_domain(fitted);
      return fitted;
    }
    if (order >= kMaxOrder)
      throw Error(ErrorCode::RecenterFailed, "Fourier refit did not reach 1e-10 (error " + std::to_string(err) + ")");
    order *= 2;
  }
}

}  // namespace

StarDomain normalize(const StarDomain& domain, NormalizeMode mode) {
  if (mode == NormalizeMode::Volume) {
    const double vol = geometric_functionals(domain).volume;
    StarDomain out = domain.scaled(std::sqrt(kPi / vol));
    return out;
  }
  return recenter(domain);
}

StarDomain apply_normalization(const StarDomain& domain, bool recenter_flag, bool volume) {
  StarDomain out = domain;
  if (recenter_flag) out = normalize(out, NormalizeMode::Recenter);
  if (volume) out = normalize(out, NormalizeMode::Volume);
  return out;
}

namespace {

template <class T, class Dist>
double holder_impl(const std::vector<T>& values, const std::vector<Eigen::Vector2d>& points, double alpha,
                   Dist dist) {
  if (values.size() != points.size()) throw Error(ErrorCode::InputError, "values and points differ in length");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  double sup = 0.0, semi = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    sup = std::max(sup, dist(values[i], T(values[i] * 0.0)));
    for (std::size_t k = i + 1; k < n; ++k) {
      const double d = (points[i] - points[k]).norm();
      if (d == 0.0) continue;
      semi = std::max(semi, dist(values[i], values[k]) / std::pow(d, alpha));
    }
  }
  return sup + semi;
}

}  // namespace

double holder_norm(const std::vector<double>& values, const std::vector<Eigen::Vector2d>& points, double alpha) {
  return holder_impl(values, points, alpha, [](double x, double y) { return std::abs(x - y); });
}

double holder_norm(const std::vector<Eigen::Matrix2d>& values, const std::vector<Eigen::Vector2d>& points,
                   double alpha) {
  return holder_impl(values, points, alpha,
                     [](const Eigen::Matrix2d& x, const Eigen::Matrix2d& y) { return (x - y).norm(); });
}

}  // namespace steinshape
