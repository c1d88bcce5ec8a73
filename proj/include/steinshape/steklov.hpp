#pragma once

#include <vector>

#include <Eigen/Core>

#include "steinshape/star_domain.hpp"
#include "steinshape/zfield.hpp"

namespace steinshape {

/// u = a0 + sum_k a_k r^k cos k theta + b_k r^k sin k theta
struct HarmonicExpansion {
  double a0 = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  ZField field() const;
};

struct SteklovOptions {
  int truncation = 40;  // K
  int boundary = 1024;  // M, at least 4K
  int count = 7;        // eigenvalues returned
};

struct SteklovResult {
  std::vector<double> eigenvalues;          // sigma_0 <= sigma_1 <= ...
  std::vector<int> multiplicities;          // cluster sizes at gap 1e-7, in order
  std::vector<Eigen::VectorXd> coefficients;  // over {1, Re z^k, Im z^k} unscaled, k = 1..K
  int truncation = 0;
  bool converged = false;
  double sigma1_change = 0.0;  // |sigma_1(K) - sigma_1(K + 4)|
  double dropped = 0;          // basis directions removed by regularization
  double c_bw = 0.0;           // 1 / sigma_1
  double bw_deficit = 0.0;     // 1 - sigma_1
};

/// Harmonic Ritz method. Throws NotConverged, DegenerateBasis, InputError.
SteklovResult steklov_spectrum(const StarDomain& domain, const SteklovOptions& opt = {});

/// Integral of |grad u|^2 over Omega divided by the boundary integral of
/// (u - mean)^2. Throws ZeroTrace.
double rayleigh_quotient(const StarDomain& domain, const HarmonicExpansion& u, int m = 2048);

/// C_BW * integral |Du|^2 - integral over dOmega of |u - mean|^2.
double trace_inequality_check(const StarDomain& domain, const HarmonicExpansion& u1, const HarmonicExpansion& u2,
                              double c_bw, int m = 2048);

}  // namespace steinshape
