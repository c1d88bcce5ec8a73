#include <doctest.h>

#include <cmath>
#include <random>

#include "steinshape/error.hpp"
#include "steinshape/metrics.hpp"
#include "steinshape/transport.hpp"
#include "support.hpp"

using namespace steinshape;

namespace {

// max c.x subject to A x <= b, x >= 0, b >= 0; dense tableau with Bland's rule
double dense_simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  T.topLeftCorner(m, n) = A;
  T.block(0, n, m, m).setIdentity();
  T.col(n + m).head(m) = b;
  T.row(m).head(n) = -c.transpose();
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (T(m, j) < -1e-12) {
        enter = j;
        break;
      }
    if (enter < 0) return T(m, n + m);
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) <= 1e-12) continue;
      const double ratio = T(i, n + m) / T(i, enter);
      if (leave < 0 || ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    REQUIRE(leave >= 0);
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i)
      if (i != leave) T.row(i) -= T(i, enter) * T.row(leave);
    basis[leave] = enter;
  }
  FAIL("simplex did not terminate");
  return 0.0;
}

double holder_lp_by_simplex(const std::vector<Eigen::Vector2d>& x, const std::vector<double>& mass, double alpha) {
  const int n = static_cast<int>(x.size());
  // variables: p_i, q_i (h = p - q), m, s
  const int nv = 2 * n + 2, im = 2 * n, is = 2 * n + 1;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  auto add = [&](Eigen::VectorXd r, double b) {
    rows.push_back(std::move(r));
    rhs.push_back(b);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(nv);
      r[i] = 1;
      r[n + i] = -1;
      r[j] = -1;
      r[n + j] = 1;
      r[is] = -std::pow((x[i] - x[j]).norm(), alpha);
      add(r, 0.0);
    }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nv);
    r[i] = 1;
    r[n + i] = -1;
    r[im] = -1;
    add(r, 0.0);
    r[i] = -1;
    r[n + i] = 1;
    add(r, 0.0);
  }
  Eigen::VectorXd budget = Eigen::VectorXd::Zero(nv);
  budget[im] = budget[is] = 1;
  add(budget, 1.0);
  Eigen::MatrixXd A(rows.size(), nv);
  for (std::size_t i = 0; i < rows.size(); ++i) A.row(i) = rows[i].transpose();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < n; ++i) {
    c[i] = mass[i];
    c[n + i] = -mass[i];
  }
  return dense_simplex(A, Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size()), c);
}

}  // namespace

TEST_CASE("transport solver on a small problem") {
  Eigen::MatrixXd cost(2, 3);
  cost << 1, 2, 3, 4, 1, 2;
  const TransportResult r = solve_transport(cost, {0.5, 0.5}, {0.2, 0.3, 0.5});
  CHECK(r.cost == doctest::Approx(1.8));
  CHECK(r.flow.rowwise().sum()(0) == doctest::Approx(0.5));
  CHECK(r.flow.colwise().sum()(2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(solve_transport(cost, {0.5, 0.6}, {0.2, 0.3, 0.5}), Error);
}

TEST_CASE("two point masses") {
  for (double t : {0.5, 1.0, 2.0}) {
    const HolderLpResult r = holder_lp({{0, 0}, {t, 0}}, {1.0, -1.0}, 1.0);
    CHECK(r.value == doctest::Approx(2 * t / (2 + t)).epsilon(1e-6));
  }
  CHECK(holder_lp({{0, 0}, {1, 0}}, {0.0, 0.0}, 0.5).value == doctest::Approx(0.0));
}

TEST_CASE("holder LP agrees with a dense simplex") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<Eigen::Vector2d> x;
    std::vector<double> mass;
    for (int i = 0; i < 7; ++i) {
      x.emplace_back(u(rng), u(rng));
      mass.push_back(u(rng));
    }
    const double alpha = rep % 2 ? 1.0 : 0.5;
    const double expect = holder_lp_by_simplex(x, mass, alpha);
    CHECK(holder_lp(x, mass, alpha).value == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("fraenkel asymmetry") {
  const FraenkelResult ball = fraenkel_asymmetry(StarDomain::ball(), 512);
  CHECK(ball.value <= 2.0 / 512);
  CHECK(ball.radius == doctest::Approx(1.0));

  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const double oracle = fraenkel_polar(e);
  CHECK(oracle == doctest::Approx(0.127).epsilon(0.005 / 0.127));
  const FraenkelResult a = fraenkel_asymmetry(e, 256), b = fraenkel_asymmetry(e, 512);
  CHECK(std::abs(b.value - oracle) <= 0.005);
  CHECK(std::abs(a.value - b.value) <= 0.01 * b.value);
  CHECK(b.center.norm() < 1e-2);

  const StarDomain shifted = testsupport::shifted_circle(0.2);
  const FraenkelResult s = fraenkel_asymmetry(shifted, 512, true);
  CHECK(s.value <= 2.0 / 512);
  CHECK(s.center.x() == doctest::Approx(0.2).epsilon(1e-2));
  CHECK(fraenkel_asymmetry(shifted, 512, false).value > 0.1);
  CHECK_THROWS_AS(fraenkel_asymmetry(e, 64), Error);
}

TEST_CASE("total variation form") {
  CHECK(zolotarev_tv(StarDomain::ball()) <= 1e-3);
  const StarDomain e = normalize(StarDomain::cosine_mode(2, 0.1), NormalizeMode::Volume);
  const double tv = zolotarev_tv(e);
  CHECK(std::abs(tv - symmetric_difference_unit_ball(e)) <= 1e-3);
  CHECK(tv <= 2 * M_PI);
}

TEST_CASE("oscillation index") {
  CHECK(oscillation_index(StarDomain::ball(), Eigen::Vector2d::Zero()) <= 1e-12);
  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  CHECK(oscillation_index(e, Eigen::Vector2d::Zero()) > 0.0);
  CHECK(oscillation_index(testsupport::shifted_circle(0.1), {0.1, 0.0}) <= 1e-6);
}

TEST_CASE("dictionary lower bound") {
  const ZolotarevEstimate b = zolotarev_lower(StarDomain::ball(), 1.0);
  CHECK(b.lower_bound <= 1e-12);
  CHECK(b.method == "dictionary");

  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const ZolotarevEstimate z = zolotarev_lower(e, 1.0);
  CHECK(z.lower_bound >= 0.08);
  CHECK(z.lower_bound == doctest::Approx(0.092).epsilon(0.02));
  CHECK(z.best_odd <= z.best_even + 1e-9);
  for (double phi : {0.3, 1.1, 2.5}) {
    const double zr = zolotarev_lower(e.rotated(phi), 1.0).lower_bound;
    CHECK(std::abs(zr - z.lower_bound) < 0.02 * z.lower_bound);
  }
  for (double alpha : {0.25, 0.5, 0.75}) CHECK(zolotarev_lower(e, alpha).lower_bound > 0.0);
}

TEST_CASE("grid LP oracle") {
  const ZolotarevEstimate ball = zolotarev_oracle(StarDomain::ball(), 1.0, 200);
  CHECK(ball.method == "lp-oracle");
  CHECK(ball.lower_bound <= ball.discretization_bound);
  CHECK(ball.lower_bound <= 1e-9);

  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const ZolotarevEstimate o = zolotarev_oracle(e, 1.0, 200);
  const ZolotarevEstimate d = zolotarev_lower(e, 1.0);
  CHECK(d.lower_bound <= o.lower_bound + o.discretization_bound);
  REQUIRE(o.history.size() >= 2);
  CHECK(o.history.back() == doctest::Approx(o.lower_bound));
  CHECK(o.lower_bound > 0.0);
  CHECK_THROWS_AS(zolotarev_oracle(e, 1.0, 500), Error);
}
