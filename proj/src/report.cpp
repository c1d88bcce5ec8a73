#include "steinshape/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "steinshape/config.hpp"
#include "steinshape/error.hpp"

namespace steinshape {

namespace {

using ojson = nlohmann::ordered_json;

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump(const ojson& j, int indent, int depth, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << ojson(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump(it.value(), indent, depth + 1, os);
      }
      os << nl << close << '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        dump(v, indent, depth + 1, os);
      }
      os << nl << close << ']';
      return;
    }
    case ojson::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson functionals_json(const DomainAnalysis& a) {
  ojson j;
  j["volume"] = a.functionals.volume;
  j["perimeter"] = a.functionals.perimeter;
  j["momentum"] = a.functionals.momentum;
  j["barycenter"] = {a.functionals.barycenter.x(), a.functionals.barycenter.y()};
  j["grid_size"] = a.functionals.grid_size;
  j["fraenkel"] = a.fraenkel.value;
  j["fraenkel_center"] = {a.fraenkel.center.x(), a.fraenkel.center.y()};
  j["fraenkel_grid"] = a.fraenkel.grid;
  j["centered"] = a.centered;
  return j;
}

ojson deficits_json(const DomainAnalysis& a) {
  ojson j;
  j["d1"] = a.deficits.d1;
  j["d2"] = a.deficits.d2;
  j["osc_l1"] = a.deficits.osc_l1;
  j["osc_l2"] = a.deficits.osc_l2;
  j["identity_residual"] = a.deficits.identity_residual;
  j["deficit_perimeter"] = a.functionals.deficit_perimeter;
  j["deficit_momentum"] = a.functionals.deficit_momentum;
  j["discrepancy_l1"] = optional_number(a.discrepancy_l1);
  j["discrepancy_l2"] = optional_number(a.discrepancy_l2);
  return j;
}

ojson steklov_json(const SteklovResult& s) {
  ojson j;
  j["eigenvalues"] = s.eigenvalues;
  j["multiplicities"] = s.multiplicities;
  j["truncation"] = s.truncation;
  j["converged"] = s.converged;
  j["sigma1_change"] = s.sigma1_change;
  j["dropped"] = s.dropped;
  j["c_bw"] = s.c_bw;
  j["bw_deficit"] = s.bw_deficit;
  return j;
}

ojson zolotarev_json(const ZolotarevEstimate& z) {
  ojson j;
  j["alpha"] = z.alpha;
  j["lower_bound"] = z.lower_bound;
  j["method"] = z.method;
  j["argmax"] = z.argmax;
  j["resolution"] = z.resolution;
  j["history"] = z.history;
  j["discretization_bound"] = z.discretization_bound;
  return j;
}

ojson pairs_json(const std::vector<std::pair<std::string, double>>& pairs) {
  ojson j = ojson::object();
  for (const auto& [k, v] : pairs) j[k] = v;
  return j;
}

}  // namespace

bool ReportBundle::empty() const {
  return !analysis && inequalities.empty() && sweeps.empty() && !expansion;
}

std::vector<std::pair<std::string, double>> default_tolerances() {
  return {
      {"functional_quadrature_rel", 1e-12},
      {"deficit_quadrature_rel", 1e-10},
      {"combined_identity_abs", 1e-9},
      {"brock_weinstock_abs", 1e-9},
      {"chain_inequality_abs", 1e-6},
      {"centering_abs", 1e-8},
      {"steklov_convergence_abs", 1e-8},
      {"stein_identity_rel", 1e-6},
      {"oblique_residual_rel", 1e-6},
      {"expansion_residual_floor", kExpansionFloor},
  };
}

ojson to_json(const InequalityReport& r) {
  ojson j;
  j["theorem"] = to_string(r.theorem);
  j["alpha"] = r.alpha;
  j["z_method"] = r.z_method;
  j["aux_name"] = r.aux_name;
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    ojson x;
    x["eps"] = row.eps;
    x["lhs"] = row.lhs;
    x["core"] = row.core;
    x["ratio"] = row.ratio;
    x["aux"] = row.aux;
    x["holds"] = row.holds;
    x["note"] = row.note;
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["c_emp"] = r.c_emp_defined ? ojson(r.c_emp) : ojson("undefined");
  j["c_emp_rule"] = r.c_emp_rule;
  j["ratio_min"] = r.ratio_min;
  j["ratio_max"] = r.ratio_max;
  j["pass"] = r.pass;
  j["violations"] = r.violations;
  return j;
}

ojson to_json(const SweepTable& t) {
  ojson j;
  j["k"] = t.k;
  ojson rows = ojson::array();
  for (const auto& r : t.rows) rows.push_back(ojson{{"eps", r.eps}, {"quantity", r.quantity}, {"value", r.value}});
  j["rows"] = rows;
  ojson slopes = ojson::array();
  for (const auto& s : t.slopes)
    slopes.push_back(ojson{{"quantity", s.quantity},
                           {"slope", s.slope},
                           {"intercept", s.intercept},
                           {"residual", s.residual},
                           {"points", s.points}});
  j["slopes"] = slopes;
  return j;
}

ojson to_json(const ExpansionSummary& e) {
  ojson j;
  j["k"] = e.k;
  ojson reps = ojson::array();
  for (const auto& r : e.reports) {
    ojson x;
    x["functional"] = r.functional;
    ojson entries = ojson::array();
    for (const auto& en : r.entries)
      entries.push_back(
          ojson{{"eps", en.eps}, {"exact", en.exact}, {"prediction", en.prediction}, {"residual", en.residual}});
    x["entries"] = entries;
    x["slope"] = r.exact ? ojson("exact") : ojson(r.slope);
    x["pass"] = r.pass;
    reps.push_back(x);
  }
  j["reports"] = reps;
  j["difference_ratio"] = e.difference_ratio;
  j["difference_limit"] = e.difference_limit;
  j["pass"] = e.pass;
  return j;
}

ojson report_json(const ReportBundle& b) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  if (b.analysis) {
    j["domain_spec"] = to_json(b.analysis->spec);
    j["functionals"] = functionals_json(*b.analysis);
    j["deficits"] = deficits_json(*b.analysis);
    j["steklov"] = steklov_json(b.analysis->steklov);
    j["zolotarev"] = zolotarev_json(b.analysis->zolotarev);
  } else {
    for (const char* k : {"domain_spec", "functionals", "deficits", "steklov", "zolotarev"}) j[k] = nullptr;
  }
  ojson ineq = ojson::array();
  for (const auto& r : b.inequalities) ineq.push_back(to_json(r));
  j["inequality_reports"] = ineq;
  j["seeds"] = b.seeds;
  j["tolerances"] = pairs_json(b.tolerances);
  auto timings = b.timings;
  if (b.analysis)
    for (const auto& [k, v] : b.analysis->timings) timings.emplace_back(k, v);
  j["timings"] = pairs_json(timings);
  if (!b.sweeps.empty()) {
    ojson s = ojson::array();
    for (const auto& t : b.sweeps) s.push_back(to_json(t));
    j["sweeps"] = s;
  }
  if (b.expansion) j["expansion"] = to_json(*b.expansion);
  return j;
}

std::string dump_json(const ojson& j, int indent) {
  std::ostringstream os;
  dump(j, indent, 0, os);
  os << '\n';
  return os.str();
}

std::string sweep_csv(const std::vector<SweepTable>& tables) {
  std::ostringstream os;
  os << "k,eps,quantity,value\n";
  for (const auto& t : tables)
    for (const auto& r : t.rows) os << r.k << ',' << number(r.eps) << ',' << r.quantity << ',' << number(r.value) << '\n';
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

void emit_report(const ReportBundle& bundle, ReportFormat format, const std::string& path) {
  if (bundle.empty()) throw Error(ErrorCode::InputError, "nothing to report");
  if (format == ReportFormat::Csv) {
    if (bundle.sweeps.empty()) throw Error(ErrorCode::InputError, "CSV output needs sweep results");
    write_text_file(path, sweep_csv(bundle.sweeps));
  } else {
    write_text_file(path, dump_json(report_json(bundle)));
  }
}

}  // namespace steinshape
