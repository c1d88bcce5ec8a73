#include "steinshape/metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "steinshape/error.hpp"
#include "steinshape/quadrature.hpp"
#include "steinshape/transport.hpp"

namespace steinshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSub = 8;  // subsamples per cell side, 64 bits per cell

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct RadiusBounds {
  double min = 0.0;
  double max = 0.0;
};

RadiusBounds radius_bounds(const StarDomain& domain) {
  RadiusBounds b{std::numeric_limits<double>::infinity(), 0.0};
  double sup_dr = 0.0;
  const int m = kCheckGrid;
  for (double t : periodic_grid(m)) {
    const RadiusJet j = domain.jet(t);
    b.min = std::min(b.min, j.r);
    b.max = std::max(b.max, j.r);
    sup_dr = std::max(sup_dr, std::abs(j.dr));
  }
  // between grid points R moves by at most sup|R'| * pi / m (up to a safety factor)
  const double slack = 2.0 * sup_dr * kPi / m + 1e-12;
  b.min -= slack;
  b.max += slack;
  return b;
}

// Square raster [-L, L]^2 of n x n cells; each cell keeps a 64-bit mask of
// which 8 x 8 subsample points lie inside Omega.
class Raster {
 public:
  Raster(const StarDomain& domain, int n, double half_width)
      : n_(n), l_(half_width), h_(2.0 * half_width / n), omega_(static_cast<std::size_t>(n) * n, 0) {
    const RadiusBounds rb = radius_bounds(domain);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto [dmin, dmax] = cell_distance_range(i, j, Eigen::Vector2d::Zero());
        std::uint64_t mask = 0;
        if (dmax < rb.min) {
          mask = ~std::uint64_t{0};
        } else if (dmin <= rb.max) {
          for (int bit = 0; bit < 64; ++bit) {
            const Eigen::Vector2d p = subsample(i, j, bit);
            if (p.norm() < domain.radius(std::atan2(p.y(), p.x()))) mask |= std::uint64_t{1} << bit;
          }
        }
        omega_[idx(i, j)] = mask;
      }
    prefix_.assign(static_cast<std::size_t>(n) * (n + 1), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        prefix_[i * (n + 1) + j + 1] = prefix_[i * (n + 1) + j] + std::popcount(omega_[idx(i, j)]);
  }

  int n() const { return n_; }
  double cell() const { return h_; }
  double sub_area() const { return h_ * h_ / 64.0; }
  std::uint64_t omega(int i, int j) const { return omega_[idx(i, j)]; }
  // prefix[j] = omega bits in cells (i, 0..j-1)
  const long* row_prefix(int i) const { return prefix_.data() + static_cast<std::size_t>(i) * (n_ + 1); }

  Eigen::Vector2d center(int i, int j) const { return {-l_ + (i + 0.5) * h_, -l_ + (j + 0.5) * h_}; }

  Eigen::Vector2d subsample(int i, int j, int bit) const {
    const int a = bit / kSub, b = bit % kSub;
    return {-l_ + (i + (a + 0.5) / kSub) * h_, -l_ + (j + (b + 0.5) / kSub) * h_};
  }

  std::uint64_t ball(int i, int j, const Eigen::Vector2d& c, double r) const {
    const auto [dmin, dmax] = cell_distance_range(i, j, c);
    if (dmax < r) return ~std::uint64_t{0};
    if (dmin > r) return 0;
    std::uint64_t mask = 0;
    const double r2 = r * r;
    for (int bit = 0; bit < 64; ++bit)
      if ((subsample(i, j, bit) - c).squaredNorm() < r2) mask |= std::uint64_t{1} << bit;
    return mask;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  std::pair<double, double> cell_distance_range(int i, int j, const Eigen::Vector2d& c) const {
    const double x0 = -l_ + i * h_, x1 = x0 + h_;
    const double y0 = -l_ + j * h_, y1 = y0 + h_;
    const double dx = std::max({x0 - c.x(), 0.0, c.x() - x1});
    const double dy = std::max({y0 - c.y(), 0.0, c.y() - y1});
    const double fx = std::max(std::abs(x0 - c.x()), std::abs(x1 - c.x()));
    const double fy = std::max(std::abs(y0 - c.y()), std::abs(y1 - c.y()));
    return {std::hypot(dx, dy), std::hypot(fx, fy)};
  }

  int n_;
  double l_, h_;
  std::vector<std::uint64_t> omega_;
  std::vector<long> prefix_;
};

double max_radius(const StarDomain& domain) { return radius_bounds(domain).max; }

// |Omega delta B_r(c)|, counting ball area outside the raster exactly.
// Rows are split into cells missed by the ball, cells it covers and a thin
// band of partial cells; only the band is tested bit by bit.
double symmetric_difference(const Raster& ras, const Eigen::Vector2d& c, double r) {
  const int n = ras.n();
  const double h = ras.cell(), l = 0.5 * n * h;
  long diff = 0, ball_bits = 0;
  for (int i = 0; i < n; ++i) {
    const long* pre = ras.row_prefix(i);
    const double x0 = -l + i * h, x1 = x0 + h;
    const double dxmin = std::max({x0 - c.x(), 0.0, c.x() - x1});
    const double dxmax = std::max(std::abs(x0 - c.x()), std::abs(x1 - c.x()));
    if (dxmin >= r) {
      diff += pre[n];
      continue;
    }
    const double w = std::sqrt(r * r - dxmin * dxmin);
    const int jlo = std::clamp(static_cast<int>(std::floor((c.y() - w + l) / h)) - 1, 0, n);
    const int jhi = std::clamp(static_cast<int>(std::floor((c.y() + w + l) / h)) + 2, jlo, n);
    int klo = jhi, khi = jhi;  // fully covered cells [klo, khi)
    if (dxmax < r) {
      const double wi = std::sqrt(r * r - dxmax * dxmax);
      klo = std::clamp(static_cast<int>(std::ceil((c.y() - wi + l) / h)) + 1, jlo, jhi);
      khi = std::clamp(static_cast<int>(std::floor((c.y() + wi + l) / h)) - 1, klo, jhi);
    }
    diff += pre[jlo] + (pre[n] - pre[jhi]);
    diff += 64L * (khi - klo) - (pre[khi] - pre[klo]);
    ball_bits += 64L * (khi - klo);
    auto partial = [&](int j) {
      const std::uint64_t b = ras.ball(i, j, c, r);
      diff += std::popcount(ras.omega(i, j) ^ b);
      ball_bits += std::popcount(b);
    };
    for (int j = jlo; j < klo; ++j) partial(j);
    for (int j = khi; j < jhi; ++j) partial(j);
  }
  const double a = ras.sub_area();
  return diff * a + std::max(0.0, kPi * r * r - ball_bits * a);
}

}  // namespace

FraenkelResult fraenkel_asymmetry(const StarDomain& domain, int n, bool search) {
  if (n < 128) throw Error(ErrorCode::GridTooCoarse, "Fraenkel raster needs N >= 128");
  const GeometricFunctionals g = geometric_functionals(domain);
  const double r = std::sqrt(g.volume / kPi);
  const double rho = max_radius(domain);
  const Raster ras(domain, n, 1.02 * rho);
  const double area = kPi * r * r;
  auto objective = [&](const Eigen::Vector2d& c) { return symmetric_difference(ras, c, r) / area; };

  FraenkelResult res;
  res.radius = r;
  res.grid = n;
  if (!search) {
    res.center = Eigen::Vector2d::Zero();
    res.value = objective(res.center);
    return res;
  }
  // Nelder-Mead over the center
  std::array<Eigen::Vector2d, 3> x;
  std::array<double, 3> f;
  const double step = 0.05 * rho;
  x[0] = g.barycenter;
  x[1] = g.barycenter + Eigen::Vector2d(step, 0.0);
  x[2] = g.barycenter + Eigen::Vector2d(0.0, step);
  for (int i = 0; i < 3; ++i) f[i] = objective(x[i]);
  const double size_tol = ras.cell() / 16.0;
  int it = 0;
  for (;; ++it) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return f[a] < f[b]; });
    const Eigen::Vector2d best = x[ord[0]], mid = x[ord[1]], worst = x[ord[2]];
    const double fb = f[ord[0]], fm = f[ord[1]], fw = f[ord[2]];
    const double diam = std::max({(best - mid).norm(), (best - worst).norm(), (mid - worst).norm()});
    if (diam <= size_tol || (fw - fb <= 1e-12 && diam <= ras.cell())) break;
    if (it >= 500) throw Error(ErrorCode::NoConvergence, "Fraenkel center search exceeded 500 iterations");
    const Eigen::Vector2d cen = 0.5 * (best + mid);
    const Eigen::Vector2d xr = cen + (cen - worst);
    const double fr = objective(xr);
    Eigen::Vector2d nx;
    double nf;
    if (fr < fb) {
      const Eigen::Vector2d xe = cen + 2.0 * (cen - worst);
      const double fe = objective(xe);
      if (fe < fr) { nx = xe; nf = fe; } else { nx = xr; nf = fr; }
    } else if (fr < fm) {
      nx = xr;
      nf = fr;
    } else {
      const Eigen::Vector2d xc = fr < fw ? cen + 0.5 * (xr - cen) : cen + 0.5 * (worst - cen);
      const double fc = objective(xc);
      if (fc < std::min(fr, fw)) {
        nx = xc;
        nf = fc;
      } else {
        // shrink toward the best vertex
        x[ord[1]] = best + 0.5 * (mid - best);
        x[ord[2]] = best + 0.5 * (worst - best);
        f[ord[1]] = objective(x[ord[1]]);
        f[ord[2]] = objective(x[ord[2]]);
        continue;
      }
    }
    x[ord[2]] = nx;
    f[ord[2]] = nf;
  }
  int ib = 0;
  for (int i = 1; i < 3; ++i)
    if (f[i] < f[ib]) ib = i;
  res.center = x[ib];
  res.value = f[ib];
  res.iterations = it;
  return res;
}

double fraenkel_polar(const StarDomain& domain) {
  const double vol = geometric_functionals(domain).volume;
  const double r2 = vol / kPi;
  // kinks where R = r
  std::vector<double> breaks;
  const int m = 8192;
  const double h = kTwoPi / m;
  auto g = [&](double t) { return domain.radius(t) - std::sqrt(r2); };
  double prev = g(0.0);
  for (int i = 1; i <= m; ++i) {
    const double cur = g(h * i);
    if ((prev < 0.0) != (cur < 0.0)) {
      double lo = h * (i - 1), hi = h * i;
      const bool lo_neg = prev < 0.0;
      for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0.0) == lo_neg) lo = mid;
        else hi = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  auto f = [&](double t) {
    const double r = domain.radius(t);
    Eigen::VectorXd v(1);
    v[0] = 0.5 * std::abs(r * r - r2);
    return v;
  };
  return integrate_piecewise(f, breaks, 1e-12)[0] / (kPi * r2);
}

double zolotarev_tv(const StarDomain& domain, int n) {
  const GeometricFunctionals g = geometric_functionals(domain);
  const double s = kPi / g.volume;
  const Raster ras(domain, n, 1.02 * std::max(max_radius(domain), 1.0));
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::uint64_t o = ras.omega(i, j);
      const std::uint64_t b = ras.ball(i, j, Eigen::Vector2d::Zero(), 1.0);
      acc += std::popcount(b & ~o) + s * std::popcount(o & ~b) + std::abs(1.0 - s) * std::popcount(o & b);
    }
  return acc * ras.sub_area();
}

double symmetric_difference_unit_ball(const StarDomain& domain, int n) {
  const Raster ras(domain, n, 1.02 * std::max(max_radius(domain), 1.0));
  return symmetric_difference(ras, Eigen::Vector2d::Zero(), 1.0);
}

double oscillation_index(const StarDomain& domain, const Eigen::Vector2d& y, int m) {
  const BoundaryFrame fr = boundary_frame(domain, m);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector2d d = fr.points[i] - y;
    acc += (fr.normals[i] - d / d.norm()).squaredNorm() * fr.jacobian[i];
  }
  return std::sqrt(acc * fr.dtheta());
}

namespace {

// C^alpha norm bound (sup + seminorm) for a function with sup-distance-to-
// midrange s, Lipschitz constant lip, on a set of diameter diam.
double certified_norm(double s, double lip, double alpha, double diam) {
  if (lip <= 0.0) return s;
  const double knee = 2.0 * s / lip;  // beyond this the oscillation bound 2s wins
  const double semi = knee <= diam ? std::pow(lip, alpha) * std::pow(2.0 * s, 1.0 - alpha)
                                   : lip * std::pow(diam, 1.0 - alpha);
  return s + semi;
}

struct Feature {
  double value = 0.0;
  std::string name;
};

}  // namespace

ZolotarevEstimate zolotarev_lower(const StarDomain& domain, double alpha, int degree) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  const GeometricFunctionals g = geometric_functionals(domain);
  const double lam = kPi / g.volume;
  const double rho = std::max(max_radius(domain), 1.0);
  const double diam = 2.0 * rho;
  ZolotarevEstimate est;
  est.alpha = alpha;
  est.method = "dictionary";
  est.resolution = degree;
  Feature best;
  auto offer = [&](double v, const std::string& name, int parity) {
    if (parity == 0) est.best_even = std::max(est.best_even, v);
    if (parity == 1) est.best_odd = std::max(est.best_odd, v);
    if (v > best.value) best = {v, name};
  };

  // polar moments of Omega: integral of r^p e^{ik theta} = int R^{p+2}/(p+2) e^{ik theta}
  auto moment = [&](int p, int k) {
    auto f = [&](int m) {
      std::complex<double> acc(0.0);
      for (int i = 0; i < m; ++i) {
        const double t = kTwoPi * i / m;
        acc += std::pow(domain.radius(t), p + 2) / (p + 2.0) * std::polar(1.0, k * t);
      }
      acc *= kTwoPi / m;
      Eigen::VectorXd v(2);
      v << acc.real(), acc.imag();
      return v;
    };
    const Eigen::VectorXd v =
        converge_by_doubling(f, std::max(64, 8 * (domain.order() + 1) * (p + 3)), 1e-13, 1 << 18, 1.0).values;
    return std::complex<double>(v[0], v[1]);
  };

  for (int k = 1; k <= degree; ++k) {
    const std::complex<double> ik = moment(k, k);
    const double n = certified_norm(std::pow(rho, k), k * std::pow(rho, k - 1), alpha, diam);
    const double phi = std::arg(ik) / k;
    offer(lam * std::abs(ik) / n, fmt("harmonic r^%.0f cos(%.0f(theta - %.6f))", k, k, phi) + fmt(" / %.6f", n),
          k % 2);
  }
  for (int j = 1; 2 * j <= degree; ++j) {
    const double ib = kTwoPi / (2.0 * j + 2.0);
    const double io = moment(2 * j, 0).real();
    const double n = certified_norm(0.5 * std::pow(rho, 2 * j), 2.0 * j * std::pow(rho, 2 * j - 1), alpha, diam);
    offer(std::abs(ib - lam * io) / n, fmt("radial r^%.0f - %.6f", 2 * j, 0.5 * std::pow(rho, 2 * j)) +
                                           fmt(" / %.6f", n), 0);
  }

  // bulk quadratures for non-polynomial features
  const BulkQuadrature qo = polar_bulk_quadrature(domain, 512, 32);
  const BulkQuadrature qb = disk_quadrature(1.0, 512, 32);
  auto gap = [&](const auto& h) {
    double ib = 0.0, io = 0.0;
    for (std::size_t i = 0; i < qb.size(); ++i) ib += qb.weights[i] * h(qb.points[i]);
    for (std::size_t i = 0; i < qo.size(); ++i) io += qo.weights[i] * h(qo.points[i]);
    return std::abs(ib - lam * io);
  };
  for (int d = 0; d < 16; ++d) {
    const double ang = kPi * d / 16;
    const Eigen::Vector2d u(std::cos(ang), std::sin(ang));
    for (double t : {-0.5, -0.25, 0.0, 0.25, 0.5})
      for (double w : {0.1, 0.25, 0.5, 1.0}) {
        const double n = certified_norm(w, 1.0, alpha, diam);
        const double v = gap([&](const Eigen::Vector2d& p) { return std::clamp(u.dot(p) - t, -w, w); }) / n;
        offer(v, fmt("clipped affine dir %.6f shift %.2f width %.2f", ang, t, w), t == 0.0 ? 1 : 2);
      }
  }
  for (int a = 0; a < 32; ++a) {
    const double t = kTwoPi * a / 32;
    for (const Eigen::Vector2d& x0 : {domain.boundary_point(t), Eigen::Vector2d(std::cos(t), std::sin(t))})
      for (double r0 : {0.1, 0.2, 0.4}) {
        const double cap = std::pow(r0, alpha);
        const double n = 0.5 * cap + 1.0;
        const double v = gap([&](const Eigen::Vector2d& p) {
                           return std::pow(std::min((p - x0).norm(), r0), alpha) - 0.5 * cap;
                         }) / n;
        offer(v, fmt("cusp at (%.6f, %.6f) radius %.2f", x0.x(), x0.y(), r0), 2);
      }
  }
  est.lower_bound = best.value;
  est.argmax = best.name;
  return est;
}

namespace {

struct NodeSet {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<double> mass;
  int count = 0;  // cells meeting B_1 or Omega
  double cell = 0.0;
};

NodeSet oracle_nodes(const StarDomain& domain, int n, double lam, double half) {
  const Raster ras(domain, n, half);
  NodeSet s;
  s.cell = ras.cell();
  const double a = ras.sub_area();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::uint64_t o = ras.omega(i, j);
      const std::uint64_t b = ras.ball(i, j, Eigen::Vector2d::Zero(), 1.0);
      if ((o | b) == 0) continue;
      ++s.count;
      const double mu = a * (std::popcount(b) - lam * std::popcount(o));
      if (mu == 0.0) continue;
      s.nodes.push_back(ras.center(i, j));
      s.mass.push_back(mu);
    }
  return s;
}

}  // namespace

ZolotarevEstimate zolotarev_oracle(const StarDomain& domain, double alpha, int n_nodes) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  if (n_nodes > 400 || n_nodes < 4) throw Error(ErrorCode::InputError, "node budget must lie in [4, 400]");
  const GeometricFunctionals g = geometric_functionals(domain);
  const double lam = kPi / g.volume;
  const double half = 1.0001 * std::max(max_radius(domain), 1.0);
  const double total_mass = kPi + lam * g.volume;

  auto solve_at = [&](int budget, double* bound, int* grid) {
    int n = static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(budget)))) + 2;
    NodeSet s;
    for (; n >= 2; --n) {
      s = oracle_nodes(domain, n, lam, half);
      if (s.count <= budget) break;
    }
    *bound = total_mass * std::pow(s.cell / std::sqrt(2.0), alpha);
    *grid = n;
    if (s.nodes.empty()) return 0.0;
    return holder_lp(s.nodes, s.mass, alpha).value;
  };

  ZolotarevEstimate est;
  est.alpha = alpha;
  est.method = "lp-oracle";
  for (int budget : {std::max(4, n_nodes / 4), std::max(4, n_nodes / 2)}) {
    double b;
    int grid;
    est.history.push_back(solve_at(budget, &b, &grid));
  }
  int grid = 0;
  est.lower_bound = solve_at(n_nodes, &est.discretization_bound, &grid);
  est.history.push_back(est.lower_bound);
  est.resolution = grid;
  est.argmax = fmt("node grid %.0f x %.0f", grid, grid);
  return est;
}

}  // namespace steinshape
