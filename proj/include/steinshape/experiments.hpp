#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinshape/metrics.hpp"
#include "steinshape/star_domain.hpp"
#include "steinshape/stein.hpp"
#include "steinshape/steklov.hpp"

namespace steinshape {

enum class FamilyNormalization { None, Volume, Recenter, Both };

FamilyNormalization parse_normalization(const std::string& name);
std::string to_string(FamilyNormalization mode);

/// Members R = base + eps cos(k theta), normalized per `normalization`.
struct PerturbationFamily {
  int k = 2;
  std::vector<double> eps;
  FamilyNormalization normalization = FamilyNormalization::Both;
  double alpha = 1.0;
  double base_radius = 1.0;
};

/// eps in {0.02, 0.04, 0.06, 0.08, 0.10}
PerturbationFamily default_family(int k, FamilyNormalization normalization = FamilyNormalization::Both);

/// Keys: k, eps, normalization, alpha, base_radius. Throws InputError.
PerturbationFamily parse_family(const nlohmann::json& j);

struct FamilyMember {
  double eps = 0.0;
  StarDomain domain;
};

/// Throws InputError (bad k, alpha, or eps not strictly increasing) and the
/// build_domain errors.
std::vector<FamilyMember> family_members(const PerturbationFamily& family);

/// Numerical settings shared by verification, sweeps and analysis.
struct ComputeOptions {
  SteklovOptions steklov;
  SteinKernelOptions stein;
  int zolotarev_degree = 8;
  bool lp_oracle = false;  // use zolotarev_oracle instead of the dictionary
  int oracle_nodes = 200;
  int fraenkel_grid = 512;
  bool parallel = true;

  /// Every discretization grid doubled.
  ComputeOptions refined() const;
};

enum class TheoremId { Main, Kernel, BrockWeinstock, SteklovConstraint, Combined };

/// thm-main | thm-kernel | thm-bw | prop-steklov | prop-combined
TheoremId parse_theorem(const std::string& id);
std::string to_string(TheoremId id);

struct InequalityRow {
  double eps = 0.0;
  double lhs = 0.0;
  double core = 0.0;
  double ratio = 0.0;  // NaN when core vanishes
  double aux = 0.0;    // theorem specific, NaN if unused
  bool holds = true;
  std::string note;
};

struct InequalityReport {
  TheoremId theorem = TheoremId::Main;
  double alpha = 1.0;
  std::vector<InequalityRow> rows;
  /// inf of lhs/core for lower-bound statements, sup for upper-bound ones.
  double c_emp = 0.0;
  bool c_emp_defined = false;
  std::string c_emp_rule;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  bool pass = true;
  std::string z_method;
  std::string aux_name;
  std::vector<std::string> violations;
};

/// Throws NormalizationMissing, NotApplicable; solver errors propagate.
InequalityReport verify_inequality(const PerturbationFamily& family, TheoremId theorem,
                                   const ComputeOptions& opt = {});
InequalityReport verify_inequality(const std::vector<FamilyMember>& members, FamilyNormalization normalization,
                                   TheoremId theorem, double alpha, const ComputeOptions& opt = {});

struct SweepRow {
  int k = 0;
  double eps = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct SlopeFit {
  std::string quantity;
  double slope = 0.0;  // NaN when fewer than 2 positive points
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log fit residuals
  int points = 0;
};

struct SweepTable {
  int k = 0;
  std::vector<SweepRow> rows;
  std::vector<SlopeFit> slopes;
};

/// Names accepted by family_sweep.
const std::vector<std::string>& sweep_quantities();

/// Requires at least 4 amplitudes. Rows are ordered by eps, then by the
/// requested quantity order.
SweepTable family_sweep(const PerturbationFamily& family, const std::vector<std::string>& quantities,
                        const ComputeOptions& opt = {});

/// Least squares fit of log y against log x over the points with x, y > 0.
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ExpansionEntry {
  double eps = 0.0;
  double exact = 0.0;
  double prediction = 0.0;
  double residual = 0.0;
};

struct ExpansionReport {
  std::string functional;  // volume | perimeter | momentum | difference
  std::vector<ExpansionEntry> entries;
  double slope = 0.0;
  bool exact = false;  // every residual below the round-off floor
  bool pass = false;
};

struct ExpansionSummary {
  int k = 0;
  std::vector<ExpansionReport> reports;
  double difference_ratio = 0.0;  // (|dOmega| - M)/eps^2 at the smallest positive eps
  double difference_limit = 0.0;  // -d * integral of cos^2(k theta)
  bool pass = false;
};

inline constexpr double kExpansionSlopeMin = 2.5;
inline constexpr double kExpansionFloor = 1e-13;

/// R = 1 + eps cos(k theta) + c0 with c0 = -eps^2/4. Throws InputError for
/// eps outside [0, 0.1] or not strictly increasing.
ExpansionSummary expansion_validator(int k, const std::vector<double>& eps);

/// Single-domain analysis for the CLI and reports.
struct DomainAnalysis {
  DomainSpec spec;
  StarDomain domain;
  GeometricFunctionals functionals;
  DeficitReport deficits;
  SteklovResult steklov;
  ZolotarevEstimate zolotarev;
  FraenkelResult fraenkel;
  bool centered = false;
  std::optional<double> discrepancy_l1;
  std::optional<double> discrepancy_l2;
  std::map<std::string, double> timings;
};

DomainAnalysis analyze_domain(const DomainSpec& spec, double alpha = 1.0, const ComputeOptions& opt = {});

/// |boundary integral of x| <= 1e-8
bool boundary_centered(const GeometricFunctionals& g);

}  // namespace steinshape
