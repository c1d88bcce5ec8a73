#include "steinshape/steklov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "steinshape/error.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

using cd = std::complex<double>;

ZField HarmonicExpansion::field() const {
  ZField f = ZField::radial(0, a0);
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const double ak = k < a.size() ? a[k] : 0.0;
    const double bk = k < b.size() ? b[k] : 0.0;
    if (ak != 0.0 || bk != 0.0) f.add(ZField::harmonic(static_cast<int>(k) + 1, cd(ak, -bk)));
  }
  return f;
}

namespace {

struct RitzSolve {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd vectors;  // columns over the scaled basis
  Eigen::VectorXd scale;
  int dropped = 0;
};

RitzSolve ritz(const StarDomain& domain, int k, int m) {
  const BoundaryFrame fr = boundary_frame(domain, m);
  double rho = 0.0;
  for (double r : fr.r) rho = std::max(rho, r);
  const int nb = 2 * k + 1;
  // phi_0 = 1, phi_{2q-1} = Re z^q / rho^q, phi_{2q} = Im z^q / rho^q
  Eigen::MatrixXd val(m, nb), flux(m, nb);
  Eigen::VectorXd scale(nb);
  scale[0] = 1.0;
  for (int q = 1; q <= k; ++q) scale[2 * q - 1] = scale[2 * q] = std::pow(rho, -q);
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector2d x = fr.points[i];
    // J nu = R rhat - R' thetahat
    const Eigen::Vector2d jn = fr.normals[i] * fr.jacobian[i];
    const cd z(x.x(), x.y());
    cd zq(1.0), dzq(0.0);
    val(i, 0) = 1.0;
    flux(i, 0) = 0.0;
    for (int q = 1; q <= k; ++q) {
      dzq = static_cast<double>(q) * zq;  // d/dz z^q = q z^(q-1)
      zq *= z;
      const double s = scale[2 * q - 1];
      // grad Re z^q = (Re dzq, -Im dzq); grad Im z^q = (Im dzq, Re dzq)
      val(i, 2 * q - 1) = s * zq.real();
      val(i, 2 * q) = s * zq.imag();
      flux(i, 2 * q - 1) = s * (dzq.real() * jn.x() - dzq.imag() * jn.y());
      flux(i, 2 * q) = s * (dzq.imag() * jn.x() + dzq.real() * jn.y());
    }
  }
  const double h = fr.dtheta();
  Eigen::VectorXd wj(m);
  for (int i = 0; i < m; ++i) wj[i] = h * fr.jacobian[i];
  Eigen::MatrixXd bmat = val.transpose() * wj.asDiagonal() * val;
  Eigen::MatrixXd amat = h * val.transpose() * flux;
  amat = 0.5 * (amat + amat.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> be(bmat);
  const double bmax = be.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < nb; ++i)
    if (be.eigenvalues()[i] >= 1e-12 * bmax) keep.push_back(i);
  RitzSolve out;
  out.dropped = nb - static_cast<int>(keep.size());
  if (out.dropped > nb / 2)
    throw Error(ErrorCode::DegenerateBasis, "regularization dropped " + std::to_string(out.dropped) + " of " +
                                                std::to_string(nb) + " basis directions");
  Eigen::MatrixXd w(nb, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(c) = be.eigenvectors().col(keep[c]) / std::sqrt(be.eigenvalues()[keep[c]]);
  const Eigen::MatrixXd c = w.transpose() * amat * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ce(0.5 * (c + c.transpose()));
  out.sigma = ce.eigenvalues();
  out.vectors = w * ce.eigenvectors();
  out.scale = scale;
  return out;
}

}  // namespace

SteklovResult steklov_spectrum(const StarDomain& domain, const SteklovOptions& opt) {
  const int k = opt.truncation;
  if (k < 1) throw Error(ErrorCode::InputError, "truncation must be positive");
  if (opt.boundary < 4 * k) throw Error(ErrorCode::InputError, "boundary grid must be at least 4K");
  if (opt.count < 2 || opt.count > 2 * k + 1) throw Error(ErrorCode::InputError, "eigenvalue count out of range");
  const int m = opt.boundary % 2 == 0 ? opt.boundary : opt.boundary + 1;
  const RitzSolve base = ritz(domain, k, m);
  const int m2 = std::max(m, 4 * (k + 4) + (4 * (k + 4)) % 2);
  const RitzSolve finer = ritz(domain, k + 4, m2);

  SteklovResult res;
  res.truncation = k;
  res.dropped = base.dropped;
  const int n = std::min<int>(opt.count, static_cast<int>(base.sigma.size()));
  for (int i = 0; i < n; ++i) {
    res.eigenvalues.push_back(base.sigma[i]);
    res.coefficients.push_back(base.vectors.col(i).cwiseProduct(base.scale));
  }
  res.sigma1_change = std::abs(base.sigma[1] - finer.sigma[1]);
  res.converged = res.sigma1_change <= 1e-8;
  if (!res.converged)
    throw Error(ErrorCode::NotConverged,
                "sigma_1 changed by " + std::to_string(res.sigma1_change) + " under K -> K + 4");
  for (int i = 0; i < n;) {
    int j = i + 1;
    while (j < n && res.eigenvalues[j] - res.eigenvalues[j - 1] <= 1e-7) ++j;
    res.multiplicities.push_back(j - i);
    i = j;
  }
  res.c_bw = 1.0 / res.eigenvalues[1];
  res.bw_deficit = 1.0 - res.eigenvalues[1];
  return res;
}

namespace {

// Boundary mean, integral of u dnu u, integral of u^2 (after mean removal).
struct TraceForms {
  double mean = 0.0;
  double dirichlet = 0.0;
  double trace = 0.0;
};

TraceForms trace_forms(const StarDomain& domain, const HarmonicExpansion& u, int m) {
  const BoundaryFrame fr = boundary_frame(domain, m);
  const ZField f = u.field();
  std::vector<double> v(m);
  std::vector<double> fl(m);
  double len = 0.0, acc = 0.0;
  for (int i = 0; i < m; ++i) {
    v[i] = f.value(fr.points[i]);
    fl[i] = f.gradient(fr.points[i]).dot(fr.normals[i]);
    len += fr.jacobian[i];
    acc += v[i] * fr.jacobian[i];
  }
  TraceForms t;
  t.mean = acc / len;
  for (int i = 0; i < m; ++i) {
    const double c = v[i] - t.mean;
    t.dirichlet += c * fl[i] * fr.jacobian[i];
    t.trace += c * c * fr.jacobian[i];
  }
  t.dirichlet *= fr.dtheta();
  t.trace *= fr.dtheta();
  return t;
}

}  // namespace

double rayleigh_quotient(const StarDomain& domain, const HarmonicExpansion& u, int m) {
  const TraceForms t = trace_forms(domain, u, m);
  if (!(t.trace > 1e-14)) throw Error(ErrorCode::ZeroTrace, "boundary trace of u (mean removed) vanishes");
  return t.dirichlet / t.trace;
}

double trace_inequality_check(const StarDomain& domain, const HarmonicExpansion& u1, const HarmonicExpansion& u2,
                              double c_bw, int m) {
  const TraceForms t1 = trace_forms(domain, u1, m);
  const TraceForms t2 = trace_forms(domain, u2, m);
  return c_bw * (t1.dirichlet + t2.dirichlet) - (t1.trace + t2.trace);
}

}  // namespace steinshape
