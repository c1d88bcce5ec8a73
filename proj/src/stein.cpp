#include "steinshape/stein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "steinshape/error.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

using cd = std::complex<double>;

DeficitReport boundary_deficits(const StarDomain& domain) {
  auto integrand = [&](double t) {
    const RadiusJet j = domain.jet(t);
    const double jac = std::hypot(j.r, j.dr);
    const Eigen::Vector2d rhat(std::cos(t), std::sin(t));
    const Eigen::Vector2d that(-std::sin(t), std::cos(t));
    const Eigen::Vector2d nu = (j.r * rhat - j.dr * that) / jac;
    const double e2 = (rhat - j.r * nu).squaredNorm();
    const double o2 = (rhat - nu).squaredNorm();
    Eigen::VectorXd v(4);
    v << std::sqrt(e2) * jac, e2 * jac, std::sqrt(o2) * jac, o2 * jac;
    return v;
  };
  const Eigen::VectorXd v = integrate_piecewise(integrand, radius_critical_angles(domain), 1e-10);
  DeficitReport rep;
  rep.d1 = v[0];
  rep.d2 = v[1];
  rep.osc_l1 = v[2];
  rep.osc_l2 = v[3];
  const GeometricFunctionals g = geometric_functionals(domain);
  rep.identity_residual = std::abs(rep.d2 - (g.perimeter - 2.0 * domain.dimension() * g.volume + g.momentum));
  return rep;
}

Eigen::Matrix2d SteinKernelResult::tau_at(const Eigen::Vector2d& p) const {
  Eigen::Matrix2d t;
  t.row(0) = potential[0].gradient(p).transpose();
  t.row(1) = potential[1].gradient(p).transpose();
  return t;
}

namespace {

// Polynomial test fields u for the defining identity.
std::array<std::function<Eigen::Matrix<double, 2, 3>(const Eigen::Vector2d&)>, 10> test_panel() {
  using M23 = Eigen::Matrix<double, 2, 3>;  // columns: value, d/dx, d/dy
  return {
      [](const Eigen::Vector2d&) { M23 m; m << 1, 0, 0, 0, 0, 0; return m; },
      [](const Eigen::Vector2d&) { M23 m; m << 0, 0, 0, 1, 0, 0; return m; },
      [](const Eigen::Vector2d& p) { M23 m; m << p.x(), 1, 0, 0, 0, 0; return m; },
      [](const Eigen::Vector2d& p) { M23 m; m << p.y(), 0, 1, 0, 0, 0; return m; },
      [](const Eigen::Vector2d& p) { M23 m; m << 0, 0, 0, p.x(), 1, 0; return m; },
      [](const Eigen::Vector2d& p) { M23 m; m << 0, 0, 0, p.y(), 0, 1; return m; },
      [](const Eigen::Vector2d& p) {
        M23 m; m << p.x() * p.x(), 2 * p.x(), 0, p.x() * p.y(), p.y(), p.x(); return m;
      },
      [](const Eigen::Vector2d& p) {
        M23 m; m << p.y() * p.y(), 0, 2 * p.y(), -p.x() * p.y(), -p.y(), -p.x(); return m;
      },
      [](const Eigen::Vector2d& p) {
        const double x = p.x(), y = p.y();
        M23 m; m << x * x * x - y, 3 * x * x, -1, x * y * y, y * y, 2 * x * y; return m;
      },
      [](const Eigen::Vector2d& p) {
        const double x = p.x(), y = p.y();
        M23 m; m << 1 + x * y, y, x, 2 - x * x + y * y * y, -2 * x, 3 * y * y; return m;
      },
  };
}

}  // namespace

SteinKernelResult stein_kernel_solve(const StarDomain& domain, const SteinKernelOptions& opt) {
  const GeometricFunctionals geo = geometric_functionals(domain);
  const double offset = (geo.barycenter * geo.perimeter).norm();
  if (offset > 1e-8)
    throw Error(ErrorCode::NotCentered, "boundary integral of x has norm " + std::to_string(offset));
  const int k = opt.truncation;
  const int m = opt.collocation;
  if (k < 1 || m < 2 * k + 1) throw Error(ErrorCode::InputError, "need K >= 1 and M >= 2K + 1");

  double rho = 0.0;
  for (double t : periodic_grid(1024)) rho = std::max(rho, domain.radius(t));

  // Rows weighted by sqrt(J dtheta) so the residual is an L^2(dOmega) norm.
  const BoundaryFrame fr = boundary_frame(domain, m % 2 == 0 ? m : m + 1);
  const int mm = fr.size();
  Eigen::MatrixXd a(mm, 2 * k);
  Eigen::MatrixXd rhs(mm, 2);
  std::vector<ZField> basis;
  for (int q = 1; q <= k; ++q) basis.push_back(ZField::harmonic(q, std::pow(rho, -q)));
  for (int q = 1; q <= k; ++q) basis.push_back(ZField::harmonic(q, cd(0.0, -std::pow(rho, -q))));
  for (int i = 0; i < mm; ++i) {
    const double w = std::sqrt(fr.jacobian[i]);
    for (int c = 0; c < 2 * k; ++c) a(i, c) = w * basis[c].gradient(fr.points[i]).dot(fr.normals[i]);
    rhs(i, 0) = w * fr.points[i].x();
    rhs(i, 1) = w * fr.points[i].y();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd coef = svd.solve(rhs);

  SteinKernelResult res;
  res.truncation = k;
  for (int i = 0; i < 2; ++i) {
    res.a[i].assign(k, 0.0);
    res.b[i].assign(k, 0.0);
    for (int q = 1; q <= k; ++q) {
      res.a[i][q - 1] = coef(q - 1, i) * std::pow(rho, -q);
      res.b[i][q - 1] = coef(k + q - 1, i) * std::pow(rho, -q);
      res.potential[i].add(ZField::harmonic(q, cd(res.a[i][q - 1], -res.b[i][q - 1])));
    }
  }
  for (int i = 0; i < mm; ++i) {
    const Eigen::Matrix2d t = res.tau_at(fr.points[i]);
    const Eigen::Vector2d flux = t * fr.normals[i];
    res.boundary_residual = std::max(res.boundary_residual, (flux - fr.points[i]).cwiseAbs().maxCoeff());
  }

  const BulkQuadrature q = polar_bulk_quadrature(domain, opt.n_theta, opt.n_radial);
  res.points = q.points;
  res.weights = q.weights;
  res.tau.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    res.tau[i] = res.tau_at(q.points[i]);
    const Eigen::Matrix2d diff = Eigen::Matrix2d::Identity() - res.tau[i];
    res.discrepancy_l1 += q.weights[i] * diff.norm();
    res.discrepancy_l2 += q.weights[i] * diff.squaredNorm();
    res.energy += q.weights[i] * res.tau[i].squaredNorm();
  }

  // Defining identity: integral of <tau, Du> over Omega = integral of x.u over dOmega.
  const auto panel = test_panel();
  const int mb = std::max(1024, 2 * m);
  const BoundaryFrame fb = boundary_frame(domain, mb);
  for (const auto& u : panel) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto ju = u(q.points[i]);
      Eigen::Matrix2d du;
      du << ju(0, 1), ju(0, 2), ju(1, 1), ju(1, 2);
      lhs += q.weights[i] * (res.tau[i].cwiseProduct(du)).sum();
    }
    double rhs_v = 0.0, scale = 0.0;
    for (int i = 0; i < mb; ++i) {
      const auto ju = u(fb.points[i]);
      const Eigen::Vector2d uv(ju(0, 0), ju(1, 0));
      rhs_v += fb.points[i].dot(uv) * fb.jacobian[i];
      scale += fb.points[i].norm() * uv.norm() * fb.jacobian[i];
    }
    rhs_v *= fb.dtheta();
    scale *= fb.dtheta();
    const double err = std::abs(lhs - rhs_v) / std::max(scale, 1e-300);
    res.identity_error = std::max(res.identity_error, err);
  }
  if (!(res.identity_error <= 1e-6))
    throw Error(ErrorCode::IdentityViolated,
                "Stein identity mismatch " + std::to_string(res.identity_error) + " on the test panel");
  return res;
}

double stein_discrepancy(const SteinKernelResult& result, int order) {
  if (order == 1) return result.discrepancy_l1;
  if (order == 2) return result.discrepancy_l2;
  throw Error(ErrorCode::InputError, "discrepancy order must be 1 or 2");
}

double stein_discrepancy(const SteinKernelResult& result, int order, const StarDomain& domain, int n_theta,
                         int n_radial) {
  if (order != 1 && order != 2) throw Error(ErrorCode::InputError, "discrepancy order must be 1 or 2");
  const BulkQuadrature q = polar_bulk_quadrature(domain, n_theta, n_radial);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Eigen::Matrix2d diff = Eigen::Matrix2d::Identity() - result.tau_at(q.points[i]);
    acc += q.weights[i] * (order == 1 ? diff.norm() : diff.squaredNorm());
  }
  return acc;
}

}  // namespace steinshape
