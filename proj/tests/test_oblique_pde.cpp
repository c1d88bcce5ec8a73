#include <doctest.h>

#include <cmath>

#include "steinshape/error.hpp"
#include "steinshape/experiments.hpp"
#include "steinshape/oblique_pde.hpp"
#include "steinshape/quadrature.hpp"

using namespace steinshape;

namespace {

// sup over a disk cloud of |f - g - mean(f - g)|
template <class F, class G>
double sup_error_mod_constant(F f, G g) {
  const auto pts = disk_point_cloud(0.05);
  std::vector<double> d;
  double mean = 0.0;
  for (const auto& p : pts) {
    d.push_back(f(p) - g(p));
    mean += d.back();
  }
  mean /= static_cast<double>(d.size());
  double err = 0.0;
  for (double v : d) err = std::max(err, std::abs(v - mean));
  return err;
}

// Neumann solution on the unit disk for a single dictionary member
double neumann_exact(const Eigen::Vector2d& p, int kind, int k) {
  const double r = p.norm(), t = std::atan2(p.y(), p.x());
  if (kind == 0) {  // r^(2k)
    const double c = 1.0 / (k + 1);
    return std::pow(r, 2 * k + 2) / std::pow(2.0 * k + 2, 2) - c * r * r / 4.0;
  }
  const double amp = std::pow(r, k + 2) / (4.0 * k + 4) - (k + 2.0) * std::pow(r, k) / (k * (4.0 * k + 4));
  return amp * (kind == 1 ? std::cos(k * t) : std::sin(k * t));
}

}  // namespace

TEST_CASE("ball, h = x1") {
  const ObliqueSolution s = solve_oblique(StarDomain::ball(), RhsExpansion::x1());
  CHECK(std::abs(s.c_star) < 1e-12);
  const double err = sup_error_mod_constant(
      [&](const Eigen::Vector2d& p) { return s.evaluate(p).value; },
      [](const Eigen::Vector2d& p) {
        const double r = p.norm();
        return (r * r * r / 8.0 - 3.0 * r / 8.0) * (r > 0 ? p.x() / r : 0.0);
      });
  CHECK(err < 1e-8);
  CHECK(s.boundary_residual < 1e-12);
  CHECK(s.a.at(0) == doctest::Approx(-0.375).epsilon(1e-12));
}

TEST_CASE("ball, h = |x|^2") {
  const ObliqueSolution s = solve_oblique(StarDomain::ball(), RhsExpansion::r_squared());
  CHECK(s.c_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.mean_h == doctest::Approx(0.5).epsilon(1e-12));
  const double err = sup_error_mod_constant([&](const Eigen::Vector2d& p) { return s.evaluate(p).value; },
                                            [](const Eigen::Vector2d& p) {
                                              const double r2 = p.squaredNorm();
                                              return r2 * r2 / 16.0 - r2 / 8.0;
                                            });
  CHECK(err < 1e-8);
}

TEST_CASE("ball reproduces the Neumann solution of every dictionary member") {
  for (int kind = 0; kind < 3; ++kind)
    for (int k = 1; k <= 6; ++k) {
      const RhsExpansion h = kind == 0 ? RhsExpansion::radial_mode(k)
                             : kind == 1 ? RhsExpansion::cos_mode(k)
                                         : RhsExpansion::sin_mode(k);
      const ObliqueSolution s = solve_oblique(StarDomain::ball(), h);
      const double err = sup_error_mod_constant([&](const Eigen::Vector2d& p) { return s.evaluate(p).value; },
                                                [&](const Eigen::Vector2d& p) { return neumann_exact(p, kind, k); });
      CHECK(err < 1e-8);
      CHECK(s.c_star == doctest::Approx(s.mean_h).epsilon(1e-10));
    }
}

TEST_CASE("constant data") {
  const ObliqueSolution s = solve_oblique(StarDomain::cosine_mode(2, 0.1), RhsExpansion::constant(2.5));
  CHECK(s.c_star == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(s.boundary_residual < 1e-13);
  CHECK(s.interior_residual < 1e-13);
  const auto j = s.evaluate({0.3, 0.4});
  CHECK(j.gradient.norm() < 1e-12);
  CHECK(divergence_functional(s) == doctest::Approx(0.0));
}

TEST_CASE("residual gates and preconditions") {
  const StarDomain bad(1.0, {2.0}, {}, "bad");
  CHECK_THROWS_AS(solve_oblique(bad, RhsExpansion::x1()), Error);
  ObliqueOptions o;
  o.truncation = 40;
  o.collocation = 64;
  CHECK_THROWS_AS(solve_oblique(StarDomain::ball(), RhsExpansion::x1(), o), Error);
  o.truncation = 60;
  o.collocation = 256;
  CHECK_THROWS_AS(solve_oblique(StarDomain::ball(), RhsExpansion::x1(), o), Error);

  const PerturbationFamily fam = default_family(2, FamilyNormalization::None);
  for (const auto& m : family_members(fam))
    for (const RhsExpansion& h : {RhsExpansion::x1(), RhsExpansion::r_squared(), RhsExpansion::quadrupole()}) {
      const ObliqueSolution s = solve_oblique(m.domain, h);
      CHECK(s.boundary_residual <= 1e-8);
      CHECK(std::isfinite(s.interior_residual));
    }
}

TEST_CASE("divergence functional") {
  for (const RhsExpansion& h : {RhsExpansion::x1(), RhsExpansion::r_squared(), RhsExpansion::quadrupole()})
    CHECK(std::abs(divergence_functional(solve_oblique(StarDomain::ball(), h))) <= 1e-9);
  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const ObliqueSolution s = solve_oblique(e, RhsExpansion::quadrupole());
  const double div = divergence_functional(s);
  CHECK(std::abs(div) > 1e-3);
  // bulk quadrature of the Laplacian agrees with the boundary flux
  const BulkQuadrature q = disk_quadrature(1.0, 256, 32);
  const double bulk = q.integrate([&](const Eigen::Vector2d& p) { return s.evaluate(p).laplacian(); });
  CHECK(bulk == doctest::Approx(div).epsilon(1e-9));
  CHECK(s.divergence == doctest::Approx(div).epsilon(1e-9));
}

TEST_CASE("solution map is linear") {
  const StarDomain e = StarDomain::cosine_mode(3, 0.08);
  const RhsExpansion h1 = RhsExpansion::x1(), h2 = RhsExpansion::quadrupole().scaled(0.7);
  const ObliqueSolution a = solve_oblique(e, h1), b = solve_oblique(e, h2), c = solve_oblique(e, h1 + h2);
  CHECK(c.c_star == doctest::Approx(a.c_star + b.c_star).epsilon(1e-10));
  CHECK(c.a0 == doctest::Approx(a.a0 + b.a0).epsilon(1e-10));
  for (std::size_t k = 0; k < c.a.size(); ++k) {
    CHECK(std::abs(c.a[k] - a.a[k] - b.a[k]) < 1e-10);
    CHECK(std::abs(c.b[k] - a.b[k] - b.b[k]) < 1e-10);
  }
}

TEST_CASE("compatibility constant drifts away from the bulk mean at a positive rate") {
  std::vector<double> eps = {0.02, 0.04, 0.06, 0.08, 0.1}, gap;
  for (double e : eps) {
    const ObliqueSolution s = solve_oblique(StarDomain::cosine_mode(2, e), RhsExpansion::r_squared());
    gap.push_back(std::abs(s.c_star - s.mean_h));
  }
  CHECK(loglog_fit(eps, gap).slope >= 0.9);
}

TEST_CASE("kernel variant") {
  const StarDomain ball = StarDomain::ball();
  for (const RhsExpansion& h : {RhsExpansion::x1(), RhsExpansion::r_squared()}) {
    const ObliqueSolution a = solve_oblique(ball, h), b = solve_oblique_kernel_variant(ball, h);
    CHECK(b.c_star == doctest::Approx(a.c_star).epsilon(1e-8));
    const double err = sup_error_mod_constant([&](const Eigen::Vector2d& p) { return a.evaluate(p).value; },
                                              [&](const Eigen::Vector2d& p) { return b.evaluate(p).value; });
    CHECK(err < 1e-8);
  }
  const ObliqueSolution s = solve_oblique_kernel_variant(StarDomain::cosine_mode(2, 0.02), RhsExpansion::x1());
  CHECK(s.reliable);
  CHECK(s.interior_residual <= 1e-6);

  bool rejected = false;
  try {
    rejected = !solve_oblique_kernel_variant(StarDomain::cosine_mode(2, 0.6), RhsExpansion::x1()).reliable;
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::NotElliptic;
  }
  CHECK(rejected);
  CHECK(ellipticity_margin(ball) == doctest::Approx(1.0));
  // still elliptic at this amplitude; the rejection comes from the residual gate
  CHECK(ellipticity_margin(StarDomain::cosine_mode(2, 0.6)) > 0.0);
  CHECK(ellipticity_margin(StarDomain::cosine_mode(2, 0.6)) < 0.5);
}

TEST_CASE("schauder probe") {
  const std::vector<RhsExpansion> probes = {RhsExpansion::x1(), RhsExpansion::x2(), RhsExpansion::r_squared()};
  const SchauderStats b = schauder_probe(StarDomain::ball(), probes, 0.5);
  REQUIRE(b.ratios.size() == 3);
  CHECK(std::isfinite(b.max));
  CHECK(b.ratios[0] == doctest::Approx(b.ratios[1]).epsilon(1e-8));
  const SchauderStats twice = schauder_probe(StarDomain::ball(), {RhsExpansion::x1().scaled(2.0)}, 0.5);
  CHECK(twice.ratios[0] == doctest::Approx(b.ratios[0]).epsilon(1e-10));
  double prev = b.max;
  for (double e : {0.05, 0.1}) {
    const SchauderStats s = schauder_probe(StarDomain::cosine_mode(2, e), probes, 0.5);
    CHECK(std::isfinite(s.max));
    CHECK(s.max < 3.0 * prev);
    prev = s.max;
  }
}
