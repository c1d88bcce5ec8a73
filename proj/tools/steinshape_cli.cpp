#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steinshape/config.hpp"
#include "steinshape/error.hpp"
#include "steinshape/experiments.hpp"
#include "steinshape/oblique_pde.hpp"
#include "steinshape/reflected_bm.hpp"
#include "steinshape/report.hpp"

using namespace steinshape;

namespace {

enum Exit { kPass = 0, kViolation = 1, kSolverGate = 2, kInput = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InputError:
    case ErrorCode::NonPositiveRadius:
    case ErrorCode::NotStarShaped:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::NormalizationMissing:
    case ErrorCode::NotApplicable:
    case ErrorCode::IoFailure:
      return kInput;
    default:
      return kSolverGate;
  }
}

std::vector<double> parse_range(const std::string& text) {
  // start:stop:count, inclusive, or a comma separated list
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
      throw Error(ErrorCode::InputError, "expected start:stop:count, got '" + text + "'");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InputError, "bad number '" + tok + "'");
    }
  }
  return out;
}

RhsExpansion rhs_by_name(const std::string& name) {
  if (name == "r2") return RhsExpansion::r_squared();
  if (name == "x1") return RhsExpansion::x1();
  if (name == "x2") return RhsExpansion::x2();
  if (name == "quadrupole") return RhsExpansion::quadrupole();
  if (name == "const") return RhsExpansion::constant(1.0);
  throw Error(ErrorCode::InputError, "unknown right-hand side '" + name + "'");
}

void print_report(const InequalityReport& r) {
  std::printf("%s  alpha=%g  Z via %s  C_emp(%s)=", to_string(r.theorem).c_str(), r.alpha, r.z_method.c_str(),
              r.c_emp_rule.c_str());
  if (r.c_emp_defined)
    std::printf("%.6g\n", r.c_emp);
  else
    std::printf("undefined\n");
  std::printf("  %-8s %-14s %-14s %-14s %-14s %s\n", "eps", "lhs", "core", "ratio", r.aux_name.c_str(), "holds");
  for (const auto& row : r.rows)
    std::printf("  %-8.4g %-14.6e %-14.6e %-14.6e %-14.6e %s %s\n", row.eps, row.lhs, row.core, row.ratio, row.aux,
                row.holds ? "yes" : "NO", row.note.c_str());
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability diagnostics for planar star-shaped domains"};
  app.require_subcommand(1);

  ComputeOptions opt;
  double alpha = 1.0;
  std::string out_path;

  auto* analyze = app.add_subcommand("analyze", "Geometric functionals, deficits, spectrum and distances of a domain");
  std::string config;
  int grid = 0;
  analyze->add_option("config", config, "Domain JSON file")->required();
  analyze->add_option("--grid", grid, "Boundary collocation grid for the spectral solves");
  analyze->add_option("--alpha", alpha, "Zolotarev exponent in (0, 1]");
  analyze->add_flag("--oracle", opt.lp_oracle, "Use the LP oracle instead of the dictionary bound");
  analyze->add_option("--out", out_path, "Write the JSON report here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Check an inequality direction and extract an empirical constant");
  std::string input;
  std::string theorem;
  int default_k = 2;
  verify->add_option("input", input, "Domain or family JSON file, or 'default'")->required();
  verify->add_option("--theorem", theorem, "thm-main | thm-kernel | thm-bw | prop-steklov | prop-combined")->required();
  verify->add_option("--alpha", alpha, "Zolotarev exponent in (0, 1]");
  verify->add_option("--k", default_k, "Mode of the default family");
  verify->add_flag("--oracle", opt.lp_oracle, "Use the LP oracle instead of the dictionary bound");
  verify->add_option("--out", out_path, "Write the JSON report here");

  auto* sweep = app.add_subcommand("sweep", "Scan a perturbation family and fit log-log slopes");
  std::string k_list = "2";
  std::string eps_range = "0.02:0.1:5";
  std::string quantities = "one_minus_sigma1,d1,d2";
  std::string norm_name = "both";
  std::string json_path;
  sweep->add_option("--k", k_list, "Comma separated modes");
  sweep->add_option("--eps", eps_range, "start:stop:count or a comma separated list");
  sweep->add_option("--quantities", quantities, "Comma separated quantity names");
  sweep->add_option("--normalization", norm_name, "none | volume | recenter | both");
  sweep->add_option("--alpha", alpha, "Zolotarev exponent in (0, 1]");
  sweep->add_option("--out", out_path, "CSV output file")->required();
  sweep->add_option("--json", json_path, "Also write a JSON report");

  auto* expansion = app.add_subcommand("expansion", "Compare exact functionals with their second-order expansions");
  int exp_k = 2;
  std::string exp_eps = "0.01,0.02,0.04,0.06,0.08,0.1";
  expansion->add_option("--k", exp_k, "Mode");
  expansion->add_option("--eps", exp_eps, "Amplitudes in [0, 0.1]");
  expansion->add_option("--out", out_path, "Write the JSON report here");

  auto* mc = app.add_subcommand("mc", "Reflected Brownian motion cross-check of the compatibility constant");
  double dt = 1e-4, horizon = 500.0, burn_in = 1.0;
  std::uint64_t seed = 1;
  std::string h_name = "r2";
  mc->add_option("config", config, "Domain JSON file")->required();
  mc->add_option("--dt", dt, "Time step");
  mc->add_option("--T", horizon, "Horizon after burn-in");
  mc->add_option("--burn-in", burn_in, "Burn-in time");
  mc->add_option("--seed", seed, "Generator seed");
  mc->add_option("--rhs", h_name, "Right-hand side: r2 | x1 | x2 | quadrupole | const");
  mc->add_option("--out", out_path, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*analyze) {
      DomainSpec spec = load_domain_spec(config);
      if (grid > 0) {
        opt.steklov.boundary = grid;
        opt.stein.collocation = grid;
      }
      ReportBundle bundle;
      bundle.analysis = analyze_domain(spec, alpha, opt);
      bundle.tolerances = default_tolerances();
      const std::string text = dump_json(report_json(bundle));
      if (out_path.empty())
        std::cout << text;
      else
        write_text_file(out_path, text);
      return kPass;
    }

    if (*verify) {
      const TheoremId id = parse_theorem(theorem);
      InequalityReport rep;
      if (input == "default") {
        PerturbationFamily fam = default_family(default_k, FamilyNormalization::Both);
        if (id == TheoremId::SteklovConstraint) {
          // sigma_1 >= 1 needs a domain smaller than the unit ball
          fam.normalization = FamilyNormalization::Recenter;
          fam.base_radius = 0.9;
        }
        fam.alpha = alpha;
        rep = verify_inequality(fam, id, opt);
      } else {
        const nlohmann::json j = read_json_file(input);
        if (j.is_object() && j.contains("eps")) {
          PerturbationFamily fam = parse_family(j);
          if (!j.contains("alpha")) fam.alpha = alpha;
          rep = verify_inequality(fam, id, opt);
        } else {
          const DomainSpec spec = parse_domain_spec(j);
          const FamilyNormalization n = spec.normalize_volume
                                            ? (spec.recenter ? FamilyNormalization::Both : FamilyNormalization::Volume)
                                            : (spec.recenter ? FamilyNormalization::Recenter : FamilyNormalization::None);
          rep = verify_inequality({{0.0, build_domain(spec)}}, n, id, alpha, opt);
        }
      }
      print_report(rep);
      if (!out_path.empty()) {
        ReportBundle bundle;
        bundle.inequalities.push_back(rep);
        bundle.tolerances = default_tolerances();
        emit_report(bundle, ReportFormat::Json, out_path);
      }
      return rep.pass ? kPass : kViolation;
    }

    if (*sweep) {
      std::vector<std::string> qs;
      std::istringstream is(quantities);
      for (std::string q; std::getline(is, q, ',');) qs.push_back(q);
      ReportBundle bundle;
      for (double kd : parse_range(k_list)) {
        if (kd != std::floor(kd)) throw Error(ErrorCode::InputError, "modes must be integers");
        PerturbationFamily fam;
        fam.k = static_cast<int>(kd);
        fam.eps = parse_range(eps_range);
        fam.normalization = parse_normalization(norm_name);
        fam.alpha = alpha;
        SweepTable t = family_sweep(fam, qs, opt);
        std::printf("k = %d\n", t.k);
        for (const auto& s : t.slopes)
          std::printf("  %-18s slope %.4f  (rms %.2e, %d points)\n", s.quantity.c_str(), s.slope, s.residual, s.points);
        bundle.sweeps.push_back(std::move(t));
      }
      emit_report(bundle, ReportFormat::Csv, out_path);
      if (!json_path.empty()) {
        bundle.tolerances = default_tolerances();
        emit_report(bundle, ReportFormat::Json, json_path);
      }
      return kPass;
    }

    if (*expansion) {
      const ExpansionSummary s = expansion_validator(exp_k, parse_range(exp_eps));
      for (const auto& r : s.reports) {
        std::printf("%s\n", r.functional.c_str());
        for (const auto& e : r.entries)
          std::printf("  eps %-8.4g exact %.12f  order-2 %.12f  residual %.3e\n", e.eps, e.exact, e.prediction,
                      e.residual);
        if (r.exact)
          std::printf("  residuals at round-off level\n");
        else
          std::printf("  residual slope %.3f %s\n", r.slope, r.pass ? "" : "(below 2.5)");
      }
      std::printf("(|dOmega| - M)/eps^2 = %.6f, limit %.6f\n", s.difference_ratio, s.difference_limit);
      if (!out_path.empty()) {
        ReportBundle bundle;
        bundle.expansion = s;
        bundle.tolerances = default_tolerances();
        emit_report(bundle, ReportFormat::Json, out_path);
      }
      return s.pass ? kPass : kViolation;
    }

    if (*mc) {
      const DomainSpec spec = load_domain_spec(config);
      const StarDomain domain = build_domain(spec);
      const RhsExpansion h = rhs_by_name(h_name);
      const ObliqueSolution sol = solve_oblique(domain, h);
      PathConfig cfg;
      cfg.dt = dt;
      cfg.horizon = horizon;
      cfg.burn_in = burn_in;
      cfg.seed = seed;
      const FeynmanKacReport r = feynman_kac_check(domain, h, sol, cfg);
      std::printf("occupation mean %.6f +- %.6f\n", r.occupation_mean, r.std_error);
      std::printf("c_star          %.6f\n", r.c_star);
      std::printf("mean over Omega %.6f\n", r.mean_h);
      std::printf("z = %.3f  %s\n", r.z_score, r.agree ? "agree" : "DISAGREE");
      if (!out_path.empty()) {
        nlohmann::ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["domain_spec"] = to_json(spec);
        j["feynman_kac"] = {{"h", h_name},
                            {"occupation_mean", r.occupation_mean},
                            {"std_error", r.std_error},
                            {"c_star", r.c_star},
                            {"mean_h", r.mean_h},
                            {"z_score", r.z_score},
                            {"agree", r.agree}};
        j["seeds"] = {seed};
        j["config"] = {{"dt", dt}, {"horizon", horizon}, {"burn_in", burn_in}};
        write_text_file(out_path, dump_json(j));
      }
      return r.agree ? kPass : kViolation;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolverGate;
  }
  return kPass;
}
