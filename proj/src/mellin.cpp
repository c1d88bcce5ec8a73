#include "steinshape/mellin.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "steinshape/error.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

using cd = std::complex<double>;

FieldJet polar_to_cartesian(const PolarJet& pj, double r, double theta) {
  const Eigen::Vector2d rhat(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d that(-std::sin(theta), std::cos(theta));
  FieldJet j;
  j.value = pj.f;
  j.gradient = pj.fr * rhat + (pj.ft / r) * that;
  const double hrr = pj.frr;
  const double hrt = pj.frt / r - pj.ft / (r * r);
  const double htt = pj.fr / r + pj.ftt / (r * r);
  j.hessian = hrr * rhat * rhat.transpose() + hrt * (rhat * that.transpose() + that * rhat.transpose()) +
              htt * that * that.transpose();
  return j;
}

PolarJet SeparatedTerm::polar(double r, double theta) const {
  const int k = static_cast<int>(phi_hat.size() - 1) / 2;
  cd phi(0.0), dphi(0.0), ddphi(0.0);
  for (int m = -k; m <= k; ++m) {
    const cd e = phi_hat[m + k] * std::polar(1.0, m * theta);
    phi += e;
    dphi += cd(0.0, m) * e;
    ddphi -= static_cast<double>(m) * m * e;
  }
  const cd l = lambda;
  const cd rl = r > 0.0 ? std::exp(l * std::log(r)) : cd(0.0);
  const cd rl1 = r > 0.0 ? rl / r : cd(0.0);
  const cd rl2 = r > 0.0 ? rl1 / r : cd(0.0);
  const cd f = rl * phi, fr = l * rl1 * phi, ft = rl * dphi;
  const cd frr = l * (l - 1.0) * rl2 * phi, frt = l * rl1 * dphi, ftt = rl * ddphi;
  auto part = [this](cd z) { return weight * (imag_part ? z.imag() : z.real()); };
  return {part(f), part(fr), part(ft), part(frr), part(frt), part(ftt)};
}

double SeparatedTerm::disk_integral() const {
  const int k = static_cast<int>(phi_hat.size() - 1) / 2;
  const cd v = kTwoPi * phi_hat[k] / (lambda + 2.0);
  return weight * (imag_part ? v.imag() : v.real());
}

Eigen::MatrixXd fourier_diff_matrix(int n) {
  if (n % 2 == 0) throw Error(ErrorCode::InputError, "Fourier differentiation needs an odd node count");
  const double h = kTwoPi / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int diff = i - j;
      const double sign = (std::abs(diff) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::sin(0.5 * diff * h);
    }
  return d;
}

Eigen::VectorXcd trig_coefficients(const Eigen::VectorXcd& values) {
  const int n = static_cast<int>(values.size());
  const int k = (n - 1) / 2;
  const double h = kTwoPi / n;
  Eigen::VectorXcd c(n);
  for (int m = -k; m <= k; ++m) {
    cd acc(0.0);
    for (int j = 0; j < n; ++j) acc += values[j] * std::polar(1.0, -m * h * j);
    c[m + k] = acc / static_cast<double>(n);
  }
  return c;
}

double kernel_operator(const StarDomain& domain, const PolarJet& pj, double r, double theta) {
  const RadiusJet rj = domain.jet(theta);
  const double hrr = pj.frr;
  const double hrt = pj.frt / r - pj.ft / (r * r);
  const double htt = pj.fr / r + pj.ftt / (r * r);
  return rj.r * (hrr + htt) - rj.dr * hrt;
}

namespace {

struct Collocation {
  int n = 0;
  Eigen::VectorXd r, dr;
  Eigen::MatrixXd d, d2;
};

Collocation collocate(const StarDomain& domain, int k) {
  Collocation c;
  c.n = 2 * k + 1;
  c.r.resize(c.n);
  c.dr.resize(c.n);
  const double h = kTwoPi / c.n;
  for (int j = 0; j < c.n; ++j) {
    const RadiusJet rj = domain.jet(h * j);
    c.r[j] = rj.r;
    c.dr[j] = rj.dr;
  }
  c.d = fourier_diff_matrix(c.n);
  c.d2 = c.d * c.d;
  return c;
}

SeparatedTerm make_term(cd lambda, const Eigen::VectorXcd& phi_nodes, bool imag_part) {
  SeparatedTerm t;
  t.lambda = lambda;
  t.phi_hat = trig_coefficients(phi_nodes);
  t.imag_part = imag_part;
  double sup = 0.0;
  for (int i = 0; i < phi_nodes.size(); ++i)
    sup = std::max(sup, std::abs(imag_part ? phi_nodes[i].imag() : phi_nodes[i].real()));
  t.weight = sup > 0.0 ? 1.0 / sup : 1.0;
  return t;
}

}  // namespace

std::vector<SeparatedTerm> homogeneous_modes(const StarDomain& domain, int k) {
  const Collocation c = collocate(domain, k);
  const int n = c.n;
  const Eigen::MatrixXd gd = (c.dr.array() / c.r.array()).matrix().asDiagonal() * c.d;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  a.bottomLeftCorner(n, n) = -(c.d2 + gd);
  a.bottomRightCorner(n, n) = gd;
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "angular eigenproblem failed");

  // Cluster equal eigenvalues; a repeated eigenvalue gets its eigenspace from
  // the SVD null space of (A - lambda I), since back-substituted eigenvectors
  // can be nearly parallel.
  const Eigen::MatrixXcd evecs = es.eigenvectors();
  std::vector<cd> lams;
  for (int i = 0; i < 2 * n; ++i) {
    const cd lambda = es.eigenvalues()[i];
    if (lambda.real() <= 0.0 || std::abs(lambda) < 1e-3) continue;
    if (lambda.imag() < -1e-10 * std::abs(lambda)) continue;
    lams.push_back(lambda);
  }
  std::vector<bool> used(lams.size(), false);
  std::vector<std::pair<double, SeparatedTerm>> terms;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    for (std::size_t j = i + 1; j < lams.size(); ++j)
      if (!used[j] && std::abs(lams[j] - lams[i]) <= 1e-8 * std::max(1.0, std::abs(lams[i]))) cluster.push_back(j);
    cd mean(0.0);
    for (auto j : cluster) {
      used[j] = true;
      mean += lams[j];
    }
    mean /= static_cast<double>(cluster.size());
    const int mult = static_cast<int>(cluster.size());
    const bool real = std::abs(mean.imag()) <= 1e-10 * std::abs(mean);
    std::vector<Eigen::VectorXcd> vecs;
    if (mult == 1) {
      for (int q = 0; q < 2 * n; ++q)
        if (es.eigenvalues()[q] == lams[i]) {
          vecs.push_back(evecs.col(q).head(n));
          break;
        }
    } else if (real) {
      const Eigen::MatrixXd shifted = a - mean.real() * Eigen::MatrixXd::Identity(2 * n, 2 * n);
      Eigen::BDCSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
      for (int q = 0; q < mult; ++q) vecs.push_back(svd.matrixV().col(2 * n - 1 - q).head(n).cast<cd>());
    } else {
      const Eigen::MatrixXcd shifted =
          a.cast<cd>() - mean * Eigen::MatrixXcd::Identity(2 * n, 2 * n);
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
      for (int q = 0; q < mult; ++q) vecs.push_back(svd.matrixV().col(2 * n - 1 - q).head(n));
    }
    for (auto& phi : vecs) {
      if (real) {
        Eigen::Index imax = 0;
        phi.cwiseAbs().maxCoeff(&imax);
        phi /= phi[imax];
        terms.push_back({mean.real(), make_term(cd(mean.real(), 0.0), phi, false)});
      } else {
        terms.push_back({std::abs(mean), make_term(mean, phi, false)});
        terms.push_back({std::abs(mean), make_term(mean, phi, true)});
      }
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<SeparatedTerm> out;
  out.reserve(terms.size());
  for (auto& t : terms) out.push_back(std::move(t.second));
  return out;
}

SeparatedTerm particular_mode(const StarDomain& domain, int k, double p, const Eigen::VectorXd& g) {
  const Collocation c = collocate(domain, k);
  const double l = p + 2.0;
  const Eigen::MatrixXd op = c.r.asDiagonal() * (l * l * Eigen::MatrixXd::Identity(c.n, c.n) + c.d2) -
                             (l - 1.0) * c.dr.asDiagonal() * c.d;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(op, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::VectorXd phi = svd.solve(g);
  SeparatedTerm t;
  t.lambda = l;
  t.phi_hat = trig_coefficients(phi.cast<cd>());
  return t;
}

}  // namespace steinshape
