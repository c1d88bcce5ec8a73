#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace steinshape {

/// Value, gradient and Hessian of a scalar field at one point.
struct FieldJet {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();

  double laplacian() const { return hessian.trace(); }
  FieldJet& operator+=(const FieldJet& other);
  FieldJet& operator*=(double s);
};

/// One term Re(coeff * z^a * conj(z)^b), where z^a conj(z)^b means
/// r^(a+b) exp(i(a-b)theta). The exponents may be non-integer as long as
/// a - b is an integer, which keeps the term single-valued.
struct ZTerm {
  std::complex<double> coeff;
  double a = 0.0;
  double b = 0.0;
};

/// Finite sum of ZTerms. Covers harmonic polynomials (b = 0), radial powers
/// (a = b) and the |z|^2 z^k particular solutions of the Poisson problem.
class ZField {
 public:
  ZField() = default;
  explicit ZField(std::vector<ZTerm> terms) : terms_(std::move(terms)) {}

  /// Re(coeff * z^k): the harmonic r^k (Re c cos k theta - Im c sin k theta).
  static ZField harmonic(int k, std::complex<double> coeff);
  /// coeff * |z|^(2j).
  static ZField radial(int j, double coeff);

  void add(const ZTerm& t) { terms_.push_back(t); }
  void add(const ZField& other);
  ZField scaled(double s) const;

  const std::vector<ZTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double value(const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p) const;
  FieldJet jet(const Eigen::Vector2d& p) const;

  /// Exact integral over the disk of radius rho centred at the origin.
  double disk_integral(double rho) const;

 private:
  std::vector<ZTerm> terms_;
};

}  // namespace steinshape
