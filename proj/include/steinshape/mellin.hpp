#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "steinshape/star_domain.hpp"
#include "steinshape/zfield.hpp"

namespace steinshape {

/// Polar derivatives f, f_r, f_t, f_rr, f_rt, f_tt of a real field.
struct PolarJet {
  double f = 0.0, fr = 0.0, ft = 0.0, frr = 0.0, frt = 0.0, ftt = 0.0;
};

/// Converts polar derivatives at (r, theta), r > 0, to a Cartesian jet.
FieldJet polar_to_cartesian(const PolarJet& pj, double r, double theta);

/// weight * Re(r^lambda Phi(theta)) or weight * Im(...), with Phi given by its
/// Fourier coefficients phi_hat[m + K], m = -K..K.
struct SeparatedTerm {
  std::complex<double> lambda;
  Eigen::VectorXcd phi_hat;
  bool imag_part = false;
  double weight = 1.0;

  PolarJet polar(double r, double theta) const;
  /// Integral of the term over the unit disk.
  double disk_integral() const;
};

/// Fourier spectral differentiation matrix on n (odd) equispaced nodes.
Eigen::MatrixXd fourier_diff_matrix(int n);

/// Coefficients c_m, m = -K..K, of the trigonometric interpolant through
/// values at the nodes 2 pi j / n, n = 2K + 1.
Eigen::VectorXcd trig_coefficients(const Eigen::VectorXcd& values);

/// R (H_rr + H_tt) - R' H_rt for the polar Hessian components. This is
/// R^2 tr(D^2 f (D psi)^{-1}) written in the polar frame.
double kernel_operator(const StarDomain& domain, const PolarJet& pj, double r, double theta);

/// Separated solutions r^lambda Phi of the homogeneous kernel operator with
/// Re lambda > 0, from a 2K+1 node collocation of the angular problem.
/// Each real-valued term is normalized to unit sup of Phi.
std::vector<SeparatedTerm> homogeneous_modes(const StarDomain& domain, int k);

/// r^(p+2) Phi with the kernel operator mapping it to r^p g(theta); g is
/// sampled on the 2K+1 collocation nodes.
SeparatedTerm particular_mode(const StarDomain& domain, int k, double p, const Eigen::VectorXd& g);

}  // namespace steinshape
