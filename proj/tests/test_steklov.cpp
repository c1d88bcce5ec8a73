#include <doctest.h>

#include <cmath>
#include <random>

#include "steinshape/error.hpp"
#include "steinshape/experiments.hpp"
#include "steinshape/steklov.hpp"

using namespace steinshape;

namespace {

HarmonicExpansion random_harmonic(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> n(0.0, 1.0);
  HarmonicExpansion u;
  u.a0 = n(rng);
  for (int k = 0; k < degree; ++k) {
    u.a.push_back(n(rng) / (k + 1));
    u.b.push_back(n(rng) / (k + 1));
  }
  return u;
}

}  // namespace

TEST_CASE("disk spectrum") {
  const SteklovResult r = steklov_spectrum(StarDomain::ball());
  const double expect[] = {0, 1, 1, 2, 2, 3, 3};
  REQUIRE(r.eigenvalues.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(r.eigenvalues[i] - expect[i]) <= 1e-8);
  CHECK(r.converged);
  CHECK(r.sigma1_change <= 1e-8);
  CHECK(r.multiplicities == std::vector<int>{1, 2, 2, 2});
  CHECK(std::abs(r.c_bw - 1.0) <= 1e-8);
  // constant eigenfunction for sigma_0
  const Eigen::VectorXd& v0 = r.coefficients.at(0);
  CHECK(v0.tail(v0.size() - 1).norm() <= 1e-8 * v0.norm());
}

TEST_CASE("spectrum scales with the radius") {
  for (double rho : {0.5, 2.0}) {
    const SteklovResult r = steklov_spectrum(StarDomain::ball(rho));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0 / rho).epsilon(1e-9));
    CHECK(r.eigenvalues[3] == doctest::Approx(2.0 / rho).epsilon(1e-9));
  }
}

TEST_CASE("option checks") {
  SteklovOptions o;
  o.truncation = 40;
  o.boundary = 100;
  CHECK_THROWS_AS(steklov_spectrum(StarDomain::ball(), o), Error);
}

TEST_CASE("Brock-Weinstock direction on volume-normalized domains") {
  const StarDomain e = normalize(StarDomain::cosine_mode(2, 0.1), NormalizeMode::Volume);
  const SteklovResult r = steklov_spectrum(e);
  CHECK(r.eigenvalues[1] < 1.0 - 1e-6);
  CHECK(std::abs(r.eigenvalues[0]) <= 1e-9);
  for (double s : r.eigenvalues) CHECK(s >= -1e-10);
  for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  for (int k : {2, 3})
    for (const auto& m : family_members(default_family(k, FamilyNormalization::Volume))) {
      const SteklovResult s = steklov_spectrum(m.domain);
      CHECK(s.eigenvalues[1] <= 1.0 + 1e-9);
      CHECK(s.eigenvalues[1] < 1.0 - 1e-8);
      CHECK(s.converged);
    }
}

TEST_CASE("spectrum is rotation invariant") {
  const StarDomain d(1.0, {0.03, 0.06, 0.0, 0.02}, {0.01, 0.0, 0.04}, "mixed");
  const SteklovResult a = steklov_spectrum(d), b = steklov_spectrum(d.rotated(1.234));
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
    CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-9);
}

TEST_CASE("rayleigh quotient") {
  HarmonicExpansion x1;
  x1.a = {1.0};
  CHECK(rayleigh_quotient(StarDomain::ball(), x1) == doctest::Approx(1.0).epsilon(1e-12));
  HarmonicExpansion triple = x1;
  triple.a = {3.0};
  triple.a0 = 5.0;
  CHECK(rayleigh_quotient(StarDomain::ball(), triple) == doctest::Approx(1.0).epsilon(1e-12));

  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const double s1 = steklov_spectrum(e).eigenvalues[1];
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) CHECK(rayleigh_quotient(e, random_harmonic(rng, 6)) >= s1 - 1e-9);

  HarmonicExpansion c;
  c.a0 = 2.0;
  try {
    rayleigh_quotient(e, c);
    FAIL("constant accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ZeroTrace);
  }
}

TEST_CASE("trace inequality") {
  HarmonicExpansion c1, c2;
  c1.a0 = 1.0;
  c2.a0 = -2.0;
  CHECK(std::abs(trace_inequality_check(StarDomain::ball(), c1, c2, 1.0)) <= 1e-12);

  HarmonicExpansion x1, x2;
  x1.a = {1.0};
  x2.b = {1.0};
  CHECK(std::abs(trace_inequality_check(StarDomain::ball(), x1, x2, 1.0)) <= 1e-8);

  const StarDomain e = StarDomain::cosine_mode(2, 0.1);
  const double c_bw = steklov_spectrum(e).c_bw;
  std::mt19937_64 rng(50);
  for (int i = 0; i < 50; ++i)
    CHECK(trace_inequality_check(e, random_harmonic(rng, 5), random_harmonic(rng, 5), c_bw) >= -1e-8);
}
