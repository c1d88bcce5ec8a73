#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "steinshape/experiments.hpp"

namespace steinshape {

inline constexpr int kSchemaVersion = 1;

struct ReportBundle {
  std::optional<DomainAnalysis> analysis;
  std::vector<InequalityReport> inequalities;
  std::vector<SweepTable> sweeps;
  std::optional<ExpansionSummary> expansion;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::pair<std::string, double>> timings;

  bool empty() const;
};

/// Tolerances applied by the verification and solver gates.
std::vector<std::pair<std::string, double>> default_tolerances();

nlohmann::ordered_json to_json(const InequalityReport& r);
nlohmann::ordered_json to_json(const SweepTable& t);
nlohmann::ordered_json to_json(const ExpansionSummary& e);

/// Fixed top-level layout: schema_version, domain_spec, functionals, deficits,
/// steklov, zolotarev, inequality_reports, seeds, tolerances, timings, then
/// sweeps / expansion when present.
nlohmann::ordered_json report_json(const ReportBundle& bundle);

/// Serializes with every floating point number printed as %.17g; NaN and
/// infinities become null.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Header k,eps,quantity,value and one row per (eps, quantity).
std::string sweep_csv(const std::vector<SweepTable>& tables);

enum class ReportFormat { Json, Csv };

/// Throws InputError for an empty bundle, IoFailure when the file cannot be written.
void emit_report(const ReportBundle& bundle, ReportFormat format, const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace steinshape
