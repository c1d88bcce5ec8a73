#include "steinshape/zfield.hpp"

#include <cmath>
#include <numbers>

namespace steinshape {

namespace {

using cd = std::complex<double>;

// r^(a+b) exp(i(a-b)theta) at polar coordinates (r, theta).
cd monomial(double r, double theta, double a, double b) {
  const double n = a + b;
  double mag;
  if (r == 0.0) {
    if (n == 0.0) mag = 1.0;
    else if (n > 0.0) mag = 0.0;
    else mag = std::numeric_limits<double>::infinity();
  } else {
    mag = std::pow(r, n);
  }
  return std::polar(mag, (a - b) * theta);
}

}  // namespace

FieldJet& FieldJet::operator+=(const FieldJet& other) {
  value += other.value;
  gradient += other.gradient;
  hessian += other.hessian;
  return *this;
}

FieldJet& FieldJet::operator*=(double s) {
  value *= s;
  gradient *= s;
  hessian *= s;
  return *this;
}

ZField ZField::harmonic(int k, std::complex<double> coeff) {
  return ZField({ZTerm{coeff, static_cast<double>(k), 0.0}});
}

ZField ZField::radial(int j, double coeff) {
  return ZField({ZTerm{coeff, static_cast<double>(j), static_cast<double>(j)}});
}

void ZField::add(const ZField& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

ZField ZField::scaled(double s) const {
  ZField out = *this;
  for (auto& t : out.terms_) t.coeff *= s;
  return out;
}

double ZField::value(const Eigen::Vector2d& p) const {
  const double r = p.norm();
  const double theta = std::atan2(p.y(), p.x());
  double v = 0.0;
  for (const auto& t : terms_) v += (t.coeff * monomial(r, theta, t.a, t.b)).real();
  return v;
}

Eigen::Vector2d ZField::gradient(const Eigen::Vector2d& p) const {
  const double r = p.norm();
  const double theta = std::atan2(p.y(), p.x());
  cd dz(0.0), dzb(0.0);
  for (const auto& t : terms_) {
    if (t.a != 0.0) dz += t.coeff * t.a * monomial(r, theta, t.a - 1.0, t.b);
    if (t.b != 0.0) dzb += t.coeff * t.b * monomial(r, theta, t.a, t.b - 1.0);
  }
  // d/dx = d/dz + d/dzbar, d/dy = i (d/dz - d/dzbar)
  const cd i(0.0, 1.0);
  return {(dz + dzb).real(), (i * (dz - dzb)).real()};
}

FieldJet ZField::jet(const Eigen::Vector2d& p) const {
  const double r = p.norm();
  const double theta = std::atan2(p.y(), p.x());
  cd f(0.0), dz(0.0), dzb(0.0), dzz(0.0), dzzb(0.0), dzbzb(0.0);
  for (const auto& t : terms_) {
    const double a = t.a, b = t.b;
    f += t.coeff * monomial(r, theta, a, b);
    if (a != 0.0) dz += t.coeff * a * monomial(r, theta, a - 1.0, b);
    if (b != 0.0) dzb += t.coeff * b * monomial(r, theta, a, b - 1.0);
    if (a != 0.0 && a != 1.0) dzz += t.coeff * (a * (a - 1.0)) * monomial(r, theta, a - 2.0, b);
    if (a != 0.0 && b != 0.0) dzzb += t.coeff * (a * b) * monomial(r, theta, a - 1.0, b - 1.0);
    if (b != 0.0 && b != 1.0) dzbzb += t.coeff * (b * (b - 1.0)) * monomial(r, theta, a, b - 2.0);
  }
  const cd i(0.0, 1.0);
  FieldJet j;
  j.value = f.real();
  j.gradient = {(dz + dzb).real(), (i * (dz - dzb)).real()};
  const double fxx = (dzz + 2.0 * dzzb + dzbzb).real();
  const double fyy = (-(dzz - 2.0 * dzzb + dzbzb)).real();
  const double fxy = (i * (dzz - dzbzb)).real();
  j.hessian << fxx, fxy, fxy, fyy;
  return j;
}

double ZField::disk_integral(double rho) const {
  // Only rotation-invariant terms (a == b) survive the angular integral.
  double acc = 0.0;
  for (const auto& t : terms_) {
    if (t.a != t.b) continue;
    const double n = t.a + t.b;
    acc += t.coeff.real() * 2.0 * std::numbers::pi * std::pow(rho, n + 2.0) / (n + 2.0);
  }
  return acc;
}

}  // namespace steinshape
