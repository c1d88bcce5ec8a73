#include <doctest.h>

#include <cmath>

#include "steinshape/error.hpp"
#include "steinshape/oblique_pde.hpp"
#include "steinshape/reflected_bm.hpp"

using namespace steinshape;

TEST_CASE("reflection step") {
  const StarDomain ball = StarDomain::ball();
  const Eigen::Vector2d in(0.3, -0.2);
  CHECK((reflect_to_disk(ball, in) - in).norm() == 0.0);
  const Eigen::Vector2d out(0.9, 0.6);
  const Eigen::Vector2d y = reflect_to_disk(ball, out);
  CHECK(y.norm() <= 1.0);
  CHECK(y.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((y - out.normalized()).norm() < 1e-12);

  // oblique pull-back still lands on the circle
  const StarDomain e = StarDomain::cosine_mode(2, 0.2);
  for (double t : {0.3, 0.9, 2.0, 4.0}) {
    const Eigen::Vector2d x = 1.01 * Eigen::Vector2d(std::cos(t), std::sin(t));
    const Eigen::Vector2d z = reflect_to_disk(e, x);
    CHECK(z.norm() <= 1.0);
    CHECK(z.norm() > 1.0 - 1e-12);
  }
}

TEST_CASE("input checks") {
  const StarDomain ball = StarDomain::ball();
  PathConfig c;
  c.horizon = 1.0;
  c.dt = 1e-2;
  CHECK_THROWS_AS(simulate(ball, c), Error);
  c.dt = 1e-4;
  c.burn_in = 0.5;
  CHECK_THROWS_AS(simulate(ball, c), Error);
  c.burn_in = 1.0;
  c.x0 = {1.0, 0.0};
  CHECK_THROWS_AS(simulate(ball, c), Error);
  c.x0 = {0.0, 0.0};
  c.horizon = -1.0;
  CHECK_THROWS_AS(simulate(ball, c), Error);
  c.horizon = 1.0;
  CHECK_THROWS_AS(simulate(StarDomain(1.0, {2.0}, {}, "bad"), c), Error);
}

TEST_CASE("zero noise keeps the path at its start") {
  PathConfig c;
  c.horizon = 1.0;
  c.x0 = {0.25, -0.5};
  long seen = 0;
  const PathStats st = simulate(
      StarDomain::cosine_mode(2, 0.1), c, [&](const Eigen::Vector2d& p) { seen += (p - c.x0).norm() == 0.0; },
      [] { return Eigen::Vector2d::Zero(); });
  CHECK(st.reflections == 0);
  CHECK(seen == st.steps);
  CHECK((st.endpoint - c.x0).norm() == 0.0);
}

TEST_CASE("constant drift is held on the circle") {
  PathConfig c;
  c.horizon = 2.0;
  const PathStats st =
      simulate(StarDomain::cosine_mode(3, 0.1), c, {}, [] { return Eigen::Vector2d(5.0, 3.0); });
  CHECK(st.reflections > 0);
  CHECK(st.max_radius <= 1.0);
  CHECK(st.endpoint.norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("seeded paths are reproducible and stay in the disk") {
  PathConfig c;
  c.horizon = 5.0;
  c.seed = 77;
  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const PathStats a = simulate(e, c), b = simulate(e, c);
  CHECK(a.endpoint == b.endpoint);
  CHECK(a.reflections == b.reflections);
  CHECK(a.max_radius <= 1.0);
  CHECK(a.reflections > 0);
  c.seed = 78;
  CHECK(simulate(e, c).endpoint != a.endpoint);
}

TEST_CASE("uniform stationary law on the ball") {
  // |X|^2 is uniform on [0, 1]; chi-square over 10 bins on thinned samples
  PathConfig c;
  c.horizon = 1000.0;
  c.seed = 2024;
  const long thin = std::lround(1.0 / c.dt);
  std::vector<long> bins(10, 0);
  long idx = 0, n = 0;
  simulate(StarDomain::ball(), c, [&](const Eigen::Vector2d& p) {
    if (idx++ % thin) return;
    bins[std::min(9, static_cast<int>(10.0 * p.squaredNorm()))]++;
    ++n;
  });
  double chi2 = 0.0;
  const double expect = n / 10.0;
  for (long b : bins) chi2 += (b - expect) * (b - expect) / expect;
  CHECK(chi2 < 21.67);  // 1% critical value, 9 dof
}

TEST_CASE("occupation averages") {
  PathConfig c;
  c.horizon = 200.0;
  c.seed = 11;
  const OccupationEstimate r2 = stationary_mean(StarDomain::ball(), RhsExpansion::r_squared(), c);
  CHECK(std::abs(r2.mean - 0.5) <= 3.0 * r2.std_error);
  CHECK(r2.std_error < 0.03);
  CHECK(r2.samples == std::lround(c.horizon / c.dt));
  CHECK(r2.reflected_fraction > 0.0);

  const OccupationEstimate x1 = stationary_mean(StarDomain::ball(), RhsExpansion::x1(), c);
  CHECK(std::abs(x1.mean) <= 3.0 * x1.std_error);

  c.horizon = 1e-4 * 10;
  CHECK_THROWS_AS(stationary_mean(StarDomain::ball(), RhsExpansion::x1(), c), Error);
}

TEST_CASE("step size consistency") {
  const StarDomain e = StarDomain::cosine_mode(2, 0.05);
  PathConfig fine, coarse;
  fine.horizon = coarse.horizon = 200.0;
  fine.seed = 5;
  coarse.seed = 6;
  fine.dt = 1e-4;
  coarse.dt = 4e-4;
  const OccupationEstimate a = stationary_mean(e, RhsExpansion::r_squared(), fine);
  const OccupationEstimate b = stationary_mean(e, RhsExpansion::r_squared(), coarse);
  const double joint = std::hypot(a.std_error, b.std_error);
  CHECK(std::abs(a.mean - b.mean) <= std::max(3.0 * joint, 5e-3));
}

TEST_CASE("feynman-kac agreement") {
  PathConfig c;
  c.horizon = 100.0;
  c.seed = 3;
  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const ObliqueSolution s = solve_oblique(e, RhsExpansion::x1());
  const FeynmanKacReport r = feynman_kac_check(e, RhsExpansion::x1(), s, c);
  CHECK(std::abs(r.c_star) < 1e-10);
  CHECK(r.agree);
  CHECK(std::abs(r.z_score) <= 3.0);

  const RhsExpansion k = RhsExpansion::constant(1.5);
  const FeynmanKacReport rk = feynman_kac_check(e, k, solve_oblique(e, k), c);
  CHECK(rk.agree);
  CHECK(rk.z_score == 0.0);
  CHECK(rk.occupation_mean == 1.5);

  ObliqueSolution bad = s;
  bad.boundary_residual = 1.0;
  try {
    feynman_kac_check(e, RhsExpansion::x1(), bad, c);
    FAIL("accepted a failed solve");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ResidualTooLarge);
  }
}
