#include "steinshape/oblique_pde.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "steinshape/error.hpp"
#include "steinshape/mellin.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

using cd = std::complex<double>;

namespace {

void set_coeff(std::vector<double>& v, int idx, double c) {
  if (static_cast<int>(v.size()) <= idx) v.resize(idx + 1, 0.0);
  v[idx] = c;
}

std::vector<double> add_vec(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out(std::max(x.size(), y.size()), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) out[i] += y[i];
  return out;
}

}  // namespace

RhsExpansion RhsExpansion::constant(double c) { return radial_mode(0, c); }
RhsExpansion RhsExpansion::x1() { return cos_mode(1); }
RhsExpansion RhsExpansion::x2() { return sin_mode(1); }
RhsExpansion RhsExpansion::r_squared() { return radial_mode(1); }
RhsExpansion RhsExpansion::quadrupole() { return cos_mode(2); }

RhsExpansion RhsExpansion::cos_mode(int k, double coeff) {
  RhsExpansion h;
  set_coeff(h.cos_part, k - 1, coeff);
  return h;
}

RhsExpansion RhsExpansion::sin_mode(int k, double coeff) {
  RhsExpansion h;
  set_coeff(h.sin_part, k - 1, coeff);
  return h;
}

RhsExpansion RhsExpansion::radial_mode(int j, double coeff) {
  RhsExpansion h;
  set_coeff(h.radial, j, coeff);
  return h;
}

RhsExpansion RhsExpansion::operator+(const RhsExpansion& o) const {
  RhsExpansion h;
  h.radial = add_vec(radial, o.radial);
  h.cos_part = add_vec(cos_part, o.cos_part);
  h.sin_part = add_vec(sin_part, o.sin_part);
  return h;
}

RhsExpansion RhsExpansion::scaled(double s) const {
  RhsExpansion h = *this;
  for (auto* v : {&h.radial, &h.cos_part, &h.sin_part})
    for (double& x : *v) x *= s;
  return h;
}

ZField RhsExpansion::field() const {
  ZField f;
  for (std::size_t j = 0; j < radial.size(); ++j)
    if (radial[j] != 0.0) f.add(ZField::radial(static_cast<int>(j), radial[j]));
  for (std::size_t k = 0; k < cos_part.size(); ++k)
    if (cos_part[k] != 0.0) f.add(ZField::harmonic(static_cast<int>(k) + 1, cos_part[k]));
  for (std::size_t k = 0; k < sin_part.size(); ++k)
    if (sin_part[k] != 0.0) f.add(ZField::harmonic(static_cast<int>(k) + 1, cd(0.0, -sin_part[k])));
  return f;
}

ZField RhsExpansion::particular() const {
  ZField f;
  for (std::size_t j = 0; j < radial.size(); ++j) {
    if (radial[j] == 0.0) continue;
    const double n = 2.0 * j + 2.0;
    f.add(ZTerm{cd(radial[j] / (n * n)), j + 1.0, j + 1.0});
  }
  for (std::size_t i = 0; i < cos_part.size(); ++i) {
    if (cos_part[i] == 0.0) continue;
    const double k = i + 1.0;
    f.add(ZTerm{cd(cos_part[i] / (4.0 * k + 4.0)), k + 1.0, 1.0});
  }
  for (std::size_t i = 0; i < sin_part.size(); ++i) {
    if (sin_part[i] == 0.0) continue;
    const double k = i + 1.0;
    f.add(ZTerm{cd(0.0, -sin_part[i] / (4.0 * k + 4.0)), k + 1.0, 1.0});
  }
  return f;
}

double RhsExpansion::value(const Eigen::Vector2d& p) const { return field().value(p); }

int RhsExpansion::harmonic_degree() const {
  return static_cast<int>(std::max(cos_part.size(), sin_part.size()));
}

int RhsExpansion::degree() const {
  return std::max(harmonic_degree(), 2 * (static_cast<int>(radial.size()) - 1));
}

bool RhsExpansion::is_zero() const {
  for (const auto* v : {&radial, &cos_part, &sin_part})
    for (double x : *v)
      if (x != 0.0) return false;
  return true;
}

namespace {

struct LsqResult {
  Eigen::VectorXd x;
  double condition = 0.0;
};

// Column-scaled least squares with an SVD condition estimate.
LsqResult scaled_lsq(Eigen::MatrixXd a, const Eigen::VectorXd& rhs) {
  Eigen::VectorXd scale(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double s = a.col(j).cwiseAbs().maxCoeff();
    scale[j] = s > 0.0 ? 1.0 / s : 1.0;
    a.col(j) *= scale[j];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LsqResult out;
  out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
  if (!(out.condition <= 1e12))
    throw Error(ErrorCode::IllConditioned, "least-squares condition estimate " + std::to_string(out.condition));
  out.x = svd.solve(rhs).cwiseProduct(scale);
  return out;
}

double mean_over_domain(const StarDomain& domain, const RhsExpansion& h) {
  const int n_radial = h.degree() / 2 + 6;
  const int n_theta = std::max(512, 16 * (domain.order() + 1) * (h.degree() + 2));
  const BulkQuadrature q = polar_bulk_quadrature(domain, n_theta, n_radial);
  const ZField hf = h.field();
  double vol = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    vol += q.weights[i];
    acc += q.weights[i] * hf.value(q.points[i]);
  }
  return acc / vol;
}

// Interior probe points strictly inside the unit disk.
std::vector<std::pair<double, double>> interior_probe(int n_theta, int n_radial) {
  const GaussRule rule = gauss_legendre_unit(n_radial);
  std::vector<std::pair<double, double>> pts;
  for (int j = 0; j < n_theta; ++j)
    for (double r : rule.nodes) pts.push_back({r, kTwoPi * (j + 0.25) / n_theta});
  return pts;
}

double sup_abs_h(const RhsExpansion& h) {
  const ZField hf = h.field();
  double s = 0.0;
  for (auto [r, t] : interior_probe(64, 12)) s = std::max(s, std::abs(hf.value({r * std::cos(t), r * std::sin(t)})));
  for (double t : periodic_grid(256)) s = std::max(s, std::abs(hf.value({std::cos(t), std::sin(t)})));
  return s;
}

}  // namespace

ObliqueSolution solve_oblique(const StarDomain& domain, const RhsExpansion& h, const ObliqueOptions& opt) {
  if (star_kappa(domain) <= 0.0) throw Error(ErrorCode::NotOblique, "kappa <= 0: boundary field is not oblique");
  const int kf = opt.truncation;
  const int m = opt.collocation;
  if (kf < 1 || kf > 48) throw Error(ErrorCode::InputError, "truncation must lie in [1, 48]");
  if (m < 2 * kf + 1) throw Error(ErrorCode::InputError, "collocation size must be at least 2 K_f + 1");

  const ZField fp = h.particular();
  const std::vector<double> grid = periodic_grid(m);
  Eigen::MatrixXd a(m, 2 * kf + 1);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double t = grid[i];
    const Eigen::Vector2d x(std::cos(t), std::sin(t));
    const Eigen::Vector2d nu = domain.normal(t);
    a(i, 0) = -0.5 * x.dot(nu);
    for (int k = 1; k <= kf; ++k) {
      a(i, k) = ZField::harmonic(k, 1.0).gradient(x).dot(nu);
      a(i, kf + k) = ZField::harmonic(k, cd(0.0, -1.0)).gradient(x).dot(nu);
    }
    rhs[i] = -fp.gradient(x).dot(nu);
  }
  const LsqResult ls = scaled_lsq(a, rhs);

  ObliqueSolution sol;
  sol.particular = fp;
  sol.truncation = kf;
  sol.condition = ls.condition;
  sol.c_star = ls.x[0];
  sol.a.assign(kf, 0.0);
  sol.b.assign(kf, 0.0);
  ZField f = fp;
  f.add(ZField::radial(1, -0.25 * sol.c_star));
  for (int k = 1; k <= kf; ++k) {
    sol.a[k - 1] = ls.x[k];
    sol.b[k - 1] = ls.x[kf + k];
    f.add(ZField::harmonic(k, cd(sol.a[k - 1], -sol.b[k - 1])));
  }
  sol.a0 = -f.disk_integral(1.0) / std::numbers::pi;
  f.add(ZField::radial(0, sol.a0));

  const ZField hf = h.field();
  for (auto [r, t] : interior_probe(32, 10)) {
    const Eigen::Vector2d p(r * std::cos(t), r * std::sin(t));
    sol.interior_residual =
        std::max(sol.interior_residual, std::abs(f.jet(p).laplacian() - (hf.value(p) - sol.c_star)));
  }
  const std::vector<double> fine = periodic_grid(2 * m);
  double flux = 0.0;
  for (double t : fine) {
    const Eigen::Vector2d x(std::cos(t), std::sin(t));
    const Eigen::Vector2d g = f.gradient(x);
    sol.boundary_residual = std::max(sol.boundary_residual, std::abs(g.dot(domain.normal(t))));
    flux += g.dot(x);
  }
  sol.divergence = flux * kTwoPi / static_cast<double>(fine.size());
  sol.mean_h = mean_over_domain(domain, h);
  sol.evaluate = [f](const Eigen::Vector2d& p) { return f.jet(p); };
  return sol;
}

double ellipticity_margin(const StarDomain& domain, int n_theta) {
  double margin = std::numeric_limits<double>::infinity();
  for (double t : periodic_grid(n_theta)) {
    const RadiusJet j = domain.jet(t);
    margin = std::min(margin, j.r - 0.5 * std::abs(j.dr));
  }
  return margin;
}

ObliqueSolution solve_oblique_kernel_variant(const StarDomain& domain, const RhsExpansion& h,
                                             const ObliqueOptions& opt) {
  const double margin = ellipticity_margin(domain);
  if (!(margin > 0.0))
    throw Error(ErrorCode::NotElliptic, "symmetric part of D psi has eigenvalue " + std::to_string(margin));
  const int kf = opt.truncation;
  const int m = opt.collocation;
  if (kf < 1 || kf > 48) throw Error(ErrorCode::InputError, "truncation must lie in [1, 48]");
  if (m < 2 * kf + 1) throw Error(ErrorCode::InputError, "collocation size must be at least 2 K_f + 1");

  const int n = 2 * kf + 1;
  const double hstep = kTwoPi / n;
  std::vector<SeparatedTerm> basis = homogeneous_modes(domain, kf);

  // group h by radial power p: r^p g_p(theta)
  std::map<int, Eigen::VectorXd> groups;
  auto group = [&](int p) -> Eigen::VectorXd& {
    auto it = groups.find(p);
    if (it == groups.end()) it = groups.emplace(p, Eigen::VectorXd::Zero(n)).first;
    return it->second;
  };
  for (std::size_t j = 0; j < h.radial.size(); ++j)
    if (h.radial[j] != 0.0) group(2 * static_cast<int>(j)).array() += h.radial[j];
  for (std::size_t i = 0; i < h.cos_part.size(); ++i) {
    if (h.cos_part[i] == 0.0) continue;
    Eigen::VectorXd& g = group(static_cast<int>(i) + 1);
    for (int q = 0; q < n; ++q) g[q] += h.cos_part[i] * std::cos((i + 1.0) * hstep * q);
  }
  for (std::size_t i = 0; i < h.sin_part.size(); ++i) {
    if (h.sin_part[i] == 0.0) continue;
    Eigen::VectorXd& g = group(static_cast<int>(i) + 1);
    for (int q = 0; q < n; ++q) g[q] += h.sin_part[i] * std::sin((i + 1.0) * hstep * q);
  }
  std::vector<SeparatedTerm> particular;
  for (const auto& [p, g] : groups) particular.push_back(particular_mode(domain, kf, p, g));
  const SeparatedTerm cterm = particular_mode(domain, kf, 0.0, -Eigen::VectorXd::Ones(n));

  const int nb = static_cast<int>(basis.size());
  const auto interior = interior_probe(std::max(8, opt.interior / 8), 8);
  const int mi = static_cast<int>(interior.size());
  const std::vector<double> grid = periodic_grid(m);
  const ZField hf = h.field();

  auto sum_particular = [&](double r, double t) {
    PolarJet acc;
    for (const auto& s : particular) {
      const PolarJet pj = s.polar(r, t);
      acc.f += pj.f; acc.fr += pj.fr; acc.ft += pj.ft;
      acc.frr += pj.frr; acc.frt += pj.frt; acc.ftt += pj.ftt;
    }
    return acc;
  };

  Eigen::MatrixXd a(m + mi, nb + 1);
  Eigen::VectorXd rhs(m + mi);
  for (int i = 0; i < m; ++i) {
    const double t = grid[i];
    a(i, 0) = cterm.polar(1.0, t).fr;
    for (int j = 0; j < nb; ++j) a(i, j + 1) = basis[j].polar(1.0, t).fr;
    rhs[i] = -sum_particular(1.0, t).fr;
  }
  for (int i = 0; i < mi; ++i) {
    const auto [r, t] = interior[i];
    const Eigen::Vector2d p(r * std::cos(t), r * std::sin(t));
    a(m + i, 0) = kernel_operator(domain, cterm.polar(r, t), r, t) + 1.0;
    for (int j = 0; j < nb; ++j) a(m + i, j + 1) = kernel_operator(domain, basis[j].polar(r, t), r, t);
    rhs[m + i] = hf.value(p) - kernel_operator(domain, sum_particular(r, t), r, t);
  }
  const LsqResult ls = scaled_lsq(a, rhs);

  std::vector<SeparatedTerm> terms = particular;
  SeparatedTerm ct = cterm;
  ct.weight *= ls.x[0];
  terms.push_back(ct);
  for (int j = 0; j < nb; ++j) {
    SeparatedTerm s = basis[j];
    s.weight *= ls.x[j + 1];
    terms.push_back(s);
  }
  double integral = 0.0;
  for (const auto& s : terms) integral += s.disk_integral();

  ObliqueSolution sol;
  sol.particular = h.particular();
  sol.truncation = kf;
  sol.condition = ls.condition;
  sol.c_star = ls.x[0];
  sol.a0 = -integral / std::numbers::pi;
  const double a0 = sol.a0;

  auto polar_total = [terms](double r, double t) {
    PolarJet acc;
    for (const auto& s : terms) {
      const PolarJet pj = s.polar(r, t);
      acc.f += pj.f; acc.fr += pj.fr; acc.ft += pj.ft;
      acc.frr += pj.frr; acc.frt += pj.frt; acc.ftt += pj.ftt;
    }
    return acc;
  };
  for (auto [r, t] : interior_probe(48, 12)) {
    const Eigen::Vector2d p(r * std::cos(t), r * std::sin(t));
    const double lf = kernel_operator(domain, polar_total(r, t), r, t);
    sol.interior_residual = std::max(sol.interior_residual, std::abs(lf - (hf.value(p) - sol.c_star)));
  }
  const std::vector<double> fine = periodic_grid(2 * m);
  double flux = 0.0;
  for (double t : fine) {
    const double fr = polar_total(1.0, t).fr;
    sol.boundary_residual = std::max(sol.boundary_residual, std::abs(domain.radius(t) * fr));
    flux += fr;
  }
  sol.divergence = flux * kTwoPi / static_cast<double>(fine.size());
  sol.mean_h = mean_over_domain(domain, h);
  const double scale = sup_abs_h(h);
  const double gate = scale > 0.0 ? 1e-6 * scale : 1e-12;
  sol.reliable = sol.interior_residual <= gate && sol.boundary_residual <= gate;
  sol.evaluate = [polar_total, a0](const Eigen::Vector2d& p) {
    const double r = p.norm();
    const double t = std::atan2(p.y(), p.x());
    FieldJet j = polar_to_cartesian(polar_total(std::max(r, 1e-300), t), std::max(r, 1e-300), t);
    j.value += a0;
    return j;
  };
  return sol;
}

std::vector<Eigen::Vector2d> disk_point_cloud(double spacing) {
  std::vector<Eigen::Vector2d> pts;
  const int n = static_cast<int>(std::floor(1.0 / spacing + 1e-9));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const Eigen::Vector2d p(i * spacing, j * spacing);
      if (p.norm() <= 1.0 + 1e-12) pts.push_back(p);
    }
  return pts;
}

SchauderStats schauder_probe(const StarDomain& domain, const std::vector<RhsExpansion>& probes, double alpha,
                             const ObliqueOptions& opt) {
  const std::vector<Eigen::Vector2d> cloud = disk_point_cloud(0.1);
  SchauderStats st;
  for (const auto& h : probes) {
    const ZField hf = h.field();
    std::vector<double> hv(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) hv[i] = hf.value(cloud[i]);
    const double hn = holder_norm(hv, cloud, alpha);
    if (!(hn > 0.0)) throw Error(ErrorCode::InputError, "probe has zero Holder norm");
    const ObliqueSolution sol = solve_oblique(domain, h, opt);
    std::vector<Eigen::Matrix2d> hess(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) hess[i] = sol.evaluate(cloud[i]).hessian;
    st.ratios.push_back(holder_norm(hess, cloud, alpha) / hn);
  }
  if (!st.ratios.empty()) {
    st.max = *std::max_element(st.ratios.begin(), st.ratios.end());
    st.min = *std::min_element(st.ratios.begin(), st.ratios.end());
    double s = 0.0;
    for (double r : st.ratios) s += r;
    st.mean = s / st.ratios.size();
  }
  return st;
}

double divergence_functional(const ObliqueSolution& solution) {
  if (!(solution.boundary_residual <= 1e-6))
    throw Error(ErrorCode::ResidualTooLarge,
                "boundary residual " + std::to_string(solution.boundary_residual) + " exceeds 1e-6");
  return solution.divergence;
}

}  // namespace steinshape
