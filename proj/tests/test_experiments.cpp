#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "steinshape/error.hpp"
#include "steinshape/experiments.hpp"
#include "steinshape/report.hpp"

using namespace steinshape;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InputError;
}

double slope_of(const SweepTable& t, const std::string& q) {
  for (const auto& s : t.slopes)
    if (s.quantity == q) return s.slope;
  FAIL("missing slope " << q);
  return 0.0;
}

}  // namespace

TEST_CASE("family parsing") {
  const PerturbationFamily f =
      parse_family(json::parse(R"({"k": 3, "eps": [0.01, 0.02], "normalization": "volume", "alpha": 0.5})"));
  CHECK(f.k == 3);
  CHECK(f.eps.size() == 2);
  CHECK(f.normalization == FamilyNormalization::Volume);
  CHECK(f.alpha == 0.5);
  CHECK(f.base_radius == 1.0);

  CHECK(code_of([] { parse_family(json::array()); }) == ErrorCode::InputError);
  CHECK(code_of([] { parse_family(json::parse(R"({"eps": [0.1], "mode": 2})")); }) == ErrorCode::InputError);
  CHECK(code_of([] { parse_family(json::parse(R"({"k": 2})")); }) == ErrorCode::InputError);
  CHECK(code_of([] { parse_family(json::parse(R"({"eps": "0.1"})")); }) == ErrorCode::InputError);
  CHECK(code_of([] { parse_family(json::parse(R"({"eps": [0.1], "normalization": "area"})")); }) ==
        ErrorCode::InputError);

  PerturbationFamily bad = default_family(2);
  bad.k = 0;
  CHECK(code_of([&] { family_members(bad); }) == ErrorCode::InputError);
  bad = default_family(2);
  bad.alpha = 1.5;
  CHECK(code_of([&] { family_members(bad); }) == ErrorCode::InputError);
  bad = default_family(2);
  bad.eps = {0.02, 0.02};
  CHECK(code_of([&] { family_members(bad); }) == ErrorCode::InputError);
  bad = default_family(2);
  bad.eps = {0.9};
  bad.k = 1;
  bad.base_radius = 0.5;
  CHECK_THROWS_AS(family_members(bad), Error);
}

TEST_CASE("normalized members") {
  for (const auto& m : family_members(default_family(3))) {
    const GeometricFunctionals g = geometric_functionals(m.domain);
    CHECK(g.volume == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(boundary_centered(g));
  }
}

TEST_CASE("theorem ids") {
  for (const char* id : {"thm-main", "thm-kernel", "thm-bw", "prop-steklov", "prop-combined"})
    CHECK(to_string(parse_theorem(id)) == id);
  CHECK(code_of([] { parse_theorem("thm-x"); }) == ErrorCode::InputError);
  for (const char* n : {"none", "volume", "recenter", "both"}) CHECK(to_string(parse_normalization(n)) == n);
}

TEST_CASE("normalization preconditions") {
  CHECK(code_of([] { verify_inequality(default_family(2, FamilyNormalization::None), TheoremId::BrockWeinstock); }) ==
        ErrorCode::NormalizationMissing);
  CHECK(code_of([] { verify_inequality(default_family(2, FamilyNormalization::Volume), TheoremId::Kernel); }) ==
        ErrorCode::NormalizationMissing);
  CHECK(code_of([] { verify_inequality(default_family(2, FamilyNormalization::Recenter), TheoremId::Combined); }) ==
        ErrorCode::NormalizationMissing);
  // unit volume forces sigma_1 < 1 on every member
  CHECK(code_of([] { verify_inequality(default_family(2), TheoremId::SteklovConstraint); }) ==
        ErrorCode::NotApplicable);
}

TEST_CASE("ball-only family") {
  PerturbationFamily f = default_family(2);
  f.eps = {0.0};
  for (TheoremId t : {TheoremId::BrockWeinstock, TheoremId::Main, TheoremId::Combined}) {
    const InequalityReport r = verify_inequality(f, t);
    CHECK(r.pass);
    CHECK_FALSE(r.c_emp_defined);
    CHECK(std::isnan(r.c_emp));
    REQUIRE(r.rows.size() == 1);
    CHECK(std::isnan(r.rows[0].ratio));
    CHECK(std::abs(r.rows[0].lhs) <= 1e-9);
  }
}

TEST_CASE("brock-weinstock stability on the mode-2 family") {
  const InequalityReport r = verify_inequality(default_family(2), TheoremId::BrockWeinstock);
  CHECK(r.pass);
  CHECK(r.c_emp_rule == "inf");
  CHECK(r.c_emp_defined);
  CHECK(r.c_emp > 0.0);
  CHECK(r.c_emp == r.ratio_min);
  REQUIRE(r.rows.size() == 5);
  for (const auto& row : r.rows) {
    CHECK(row.lhs > 0.0);
    CHECK(row.holds);
    CHECK(std::isfinite(row.aux));  // chain inequality evaluated
  }
  CHECK(r.violations.empty());
}

TEST_CASE("upper-bound statements") {
  for (TheoremId t : {TheoremId::Main, TheoremId::Kernel}) {
    const InequalityReport r = verify_inequality(default_family(3), t);
    CHECK(r.pass);
    CHECK(r.c_emp_rule == "sup");
    CHECK(r.c_emp == r.ratio_max);
    CHECK(r.c_emp > 0.0);
    CHECK(std::isfinite(r.c_emp));
  }
}

TEST_CASE("combined identity") {
  const InequalityReport r = verify_inequality(default_family(2, FamilyNormalization::Volume), TheoremId::Combined);
  CHECK(r.pass);
  const auto members = family_members(default_family(2, FamilyNormalization::Volume));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].aux <= 1e-9);
    CHECK(r.rows[i].lhs == doctest::Approx(boundary_deficits(members[i].domain).d2).epsilon(1e-9));
  }
  CHECK(r.rows.back().lhs == doctest::Approx(0.157).epsilon(0.03));
}

TEST_CASE("steklov constraint on a smaller base radius") {
  PerturbationFamily f = default_family(2, FamilyNormalization::Recenter);
  f.base_radius = 0.9;
  const InequalityReport r = verify_inequality(f, TheoremId::SteklovConstraint);
  CHECK(r.pass);
  CHECK_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    CHECK(row.aux >= 1.0 - 1e-9);
    CHECK(row.lhs >= 0.0);
  }
}

TEST_CASE("serial and parallel evaluation agree") {
  ComputeOptions serial;
  serial.parallel = false;
  const InequalityReport a = verify_inequality(default_family(3), TheoremId::Main);
  const InequalityReport b = verify_inequality(default_family(3), TheoremId::Main, serial);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].ratio == b.rows[i].ratio);
}

TEST_CASE("log-log fit") {
  const std::vector<double> x = {0.1, 0.2, 0.4, 0.8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  const SlopeFit f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(f.points == 4);
  CHECK(std::isnan(loglog_fit({0.1, 0.2}, {0.0, 1.0}).slope));
}

TEST_CASE("sweep layout and rates") {
  const PerturbationFamily f2 = default_family(2);
  const SweepTable t = family_sweep(f2, {"d1", "d2", "one_minus_sigma1"});
  CHECK(t.rows.size() == 15);
  CHECK(t.rows[0].quantity == "d1");
  CHECK(t.rows[2].quantity == "one_minus_sigma1");
  CHECK(t.rows[3].eps == 0.04);
  const std::string csv = sweep_csv({t});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
  CHECK(csv.rfind("k,eps,quantity,value\n", 0) == 0);

  CHECK(slope_of(t, "d1") == doctest::Approx(1.0).epsilon(0.1));
  CHECK(slope_of(t, "d2") == doctest::Approx(2.0).epsilon(0.05));
  // the mode-2 eigenvalue pair splits at first order
  CHECK(slope_of(t, "one_minus_sigma1") == doctest::Approx(1.0).epsilon(0.1));

  const SweepTable t3 = family_sweep(default_family(3), {"one_minus_sigma1", "z_lower"});
  CHECK(slope_of(t3, "one_minus_sigma1") == doctest::Approx(2.0).epsilon(0.05));
  CHECK(slope_of(t3, "z_lower") == doctest::Approx(1.0).epsilon(0.15));

  PerturbationFamily small = default_family(2);
  small.eps = {0.004, 0.008, 0.012, 0.016, 0.02};
  CHECK(slope_of(family_sweep(small, {"z_lower_sq"}), "z_lower_sq") == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sweep input checks") {
  PerturbationFamily f = default_family(2);
  f.eps = {0.02, 0.04, 0.06};
  CHECK(code_of([&] { family_sweep(f, {"d1"}); }) == ErrorCode::InputError);
  f = default_family(2);
  CHECK(code_of([&] { family_sweep(f, {"d3"}); }) == ErrorCode::InputError);
  CHECK(code_of([&] { family_sweep(f, {"d1", "d1"}); }) == ErrorCode::InputError);
  CHECK(code_of([&] { family_sweep(f, {}); }) == ErrorCode::InputError);
  CHECK(sweep_quantities().size() == 18);
}

TEST_CASE("second-order expansion") {
  for (int k : {2, 3, 5}) {
    const ExpansionSummary s = expansion_validator(k, {0.0, 0.01, 0.02, 0.04, 0.08, 0.1});
    CHECK(s.pass);
    REQUIRE(s.reports.size() == 4);
    for (const auto& r : s.reports) {
      CHECK(r.entries.front().residual <= kExpansionFloor);
      if (!r.exact) CHECK(r.slope >= kExpansionSlopeMin);
    }
    CHECK(s.difference_limit == doctest::Approx(-2.0 * M_PI));
    CHECK(std::abs(s.difference_ratio / s.difference_limit - 1.0) <= 0.05);
  }
  // perimeter at eps = 0.1, k = 2 including the volume correction c0
  const ExpansionSummary s = expansion_validator(2, {0.1});
  CHECK(s.reports[1].entries[0].exact == doctest::Approx(6.3303).epsilon(1e-4));
  CHECK(code_of([] { expansion_validator(2, {0.2}); }) == ErrorCode::InputError);
  CHECK(code_of([] { expansion_validator(2, {0.02, 0.01}); }) == ErrorCode::InputError);
  CHECK(code_of([] { expansion_validator(2, {-0.01}); }) == ErrorCode::InputError);
}

TEST_CASE("ball analysis and report") {
  DomainSpec ball;
  ball.label = "ball";
  const DomainAnalysis a = analyze_domain(ball);
  CHECK(a.centered);
  REQUIRE(a.discrepancy_l1.has_value());
  CHECK(*a.discrepancy_l1 <= 1e-8);
  CHECK(a.fraenkel.value <= 2.0 / a.fraenkel.grid);

  ReportBundle b;
  b.analysis = a;
  b.seeds = {7};
  b.tolerances = default_tolerances();
  const nlohmann::ordered_json j = report_json(b);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expect = {"schema_version", "domain_spec", "functionals", "deficits", "steklov",
                                           "zolotarev",      "inequality_reports", "seeds", "tolerances",
                                           "timings"};
  CHECK(keys == expect);
  CHECK(j["schema_version"] == kSchemaVersion);
  for (auto it = j["deficits"].begin(); it != j["deficits"].end(); ++it)
    if (it->is_number()) CHECK(std::abs(it->get<double>()) <= 1e-12);

  // identical apart from wall-clock timings
  ReportBundle c = b;
  c.analysis = analyze_domain(ball);
  nlohmann::ordered_json ja = j, jc = report_json(c);
  ja.erase("timings");
  jc.erase("timings");
  CHECK(dump_json(ja) == dump_json(jc));
}

TEST_CASE("report output") {
  ReportBundle empty;
  CHECK(empty.empty());
  CHECK(code_of([&] { emit_report(empty, ReportFormat::Json, "/tmp/unused.json"); }) == ErrorCode::InputError);

  ReportBundle b;
  b.expansion = expansion_validator(2, {0.0, 0.01, 0.02, 0.04});
  CHECK_FALSE(b.empty());
  CHECK(code_of([&] { emit_report(b, ReportFormat::Csv, "/tmp/unused.csv"); }) == ErrorCode::InputError);
  CHECK(code_of([&] { emit_report(b, ReportFormat::Json, "/nonexistent/dir/out.json"); }) == ErrorCode::IoFailure);

  const std::string path = "steinshape_report_test.json";
  emit_report(b, ReportFormat::Json, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const json back = json::parse(ss.str());
  CHECK(back.contains("expansion"));
  CHECK(back["schema_version"] == kSchemaVersion);
  std::remove(path.c_str());

  nlohmann::ordered_json v;
  v["x"] = 0.1 + 0.2;
  v["tiny"] = 1e-300;
  v["bad"] = std::nan("");
  v["inf"] = HUGE_VAL;
  const json parsed = json::parse(dump_json(v));
  CHECK(parsed["x"].get<double>() == 0.1 + 0.2);
  CHECK(parsed["tiny"].get<double>() == 1e-300);
  CHECK(parsed["bad"].is_null());
  CHECK(parsed["inf"].is_null());
}

TEST_CASE("empirical constant is stable under grid refinement") {
  const ComputeOptions base;
  const InequalityReport a = verify_inequality(default_family(3), TheoremId::BrockWeinstock, base);
  const InequalityReport b = verify_inequality(default_family(3), TheoremId::BrockWeinstock, base.refined());
  REQUIRE(a.c_emp_defined);
  CHECK(std::abs(b.c_emp / a.c_emp - 1.0) <= 0.1);
}
