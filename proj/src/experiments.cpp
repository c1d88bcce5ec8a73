#include "steinshape/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "steinshape/config.hpp"
#include "steinshape/error.hpp"
#include "steinshape/oblique_pde.hpp"
#include "steinshape/quadrature.hpp"

namespace steinshape {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBwTol = 1e-9;
constexpr double kChainTol = 1e-6;
constexpr double kIdentityTol = 1e-9;
constexpr double kCenterTol = 1e-8;
constexpr double kZeroCore = 1e-14;
constexpr double kZeroLhs = 1e-12;

enum Need : unsigned {
  kGeo = 1u << 0,
  kDeficits = 1u << 1,
  kSteklov = 1u << 2,
  kStein = 1u << 3,
  kZ = 1u << 4,
  kFraenkel = 1u << 5,
  kOblique = 1u << 6,
};

struct MemberData {
  double eps = 0.0;
  StarDomain domain;
  std::optional<GeometricFunctionals> geo;
  std::optional<DeficitReport> deficits;
  std::optional<SteklovResult> steklov;
  std::optional<SteinKernelResult> stein;
  std::optional<ZolotarevEstimate> z;
  std::optional<FraenkelResult> fraenkel;
  std::optional<ObliqueSolution> oblique;
};

ZolotarevEstimate z_estimate(const StarDomain& domain, double alpha, const ComputeOptions& opt) {
  if (opt.lp_oracle) return zolotarev_oracle(domain, alpha, opt.oracle_nodes);
  return zolotarev_lower(domain, alpha, opt.zolotarev_degree);
}

MemberData compute_member(const FamilyMember& m, unsigned needs, double alpha, const ComputeOptions& opt) {
  MemberData d;
  d.eps = m.eps;
  d.domain = m.domain;
  if (needs & (kGeo | kStein)) d.geo = geometric_functionals(m.domain);
  if (needs & kDeficits) d.deficits = boundary_deficits(m.domain);
  if (needs & kSteklov) d.steklov = steklov_spectrum(m.domain, opt.steklov);
  if (needs & kStein) d.stein = stein_kernel_solve(m.domain, opt.stein);
  if (needs & kZ) d.z = z_estimate(m.domain, alpha, opt);
  if (needs & kFraenkel) d.fraenkel = fraenkel_asymmetry(m.domain, opt.fraenkel_grid);
  if (needs & kOblique) d.oblique = solve_oblique(m.domain, RhsExpansion::r_squared());
  return d;
}

template <class Fn>
auto map_members(const std::vector<FamilyMember>& members, bool parallel, Fn fn) {
  using R = decltype(fn(members.front()));
  std::vector<R> out;
  out.reserve(members.size());
  if (!parallel || members.size() < 2) {
    for (const auto& m : members) out.push_back(fn(m));
    return out;
  }
  std::vector<std::future<R>> jobs;
  jobs.reserve(members.size());
  for (const auto& m : members) jobs.push_back(std::async(std::launch::async, [&fn, &m] { return fn(m); }));
  // folded in member order so the result does not depend on scheduling
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

bool has_volume(FamilyNormalization n) { return n == FamilyNormalization::Volume || n == FamilyNormalization::Both; }
bool has_recenter(FamilyNormalization n) {
  return n == FamilyNormalization::Recenter || n == FamilyNormalization::Both;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

FamilyNormalization parse_normalization(const std::string& name) {
  if (name == "none") return FamilyNormalization::None;
  if (name == "volume") return FamilyNormalization::Volume;
  if (name == "recenter") return FamilyNormalization::Recenter;
  if (name == "both") return FamilyNormalization::Both;
  throw Error(ErrorCode::InputError, "unknown normalization '" + name + "'");
}

std::string to_string(FamilyNormalization mode) {
  switch (mode) {
    case FamilyNormalization::None: return "none";
    case FamilyNormalization::Volume: return "volume";
    case FamilyNormalization::Recenter: return "recenter";
    case FamilyNormalization::Both: return "both";
  }
  return "none";
}

PerturbationFamily default_family(int k, FamilyNormalization normalization) {
  PerturbationFamily f;
  f.k = k;
  f.eps = {0.02, 0.04, 0.06, 0.08, 0.10};
  f.normalization = normalization;
  return f;
}

PerturbationFamily parse_family(const nlohmann::json& j) {
  static const std::set<std::string> keys = {"k", "eps", "normalization", "alpha", "base_radius"};
  if (!j.is_object()) throw Error(ErrorCode::InputError, "family must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!keys.count(key)) throw Error(ErrorCode::InputError, "unknown family key '" + key + "'");
  PerturbationFamily f;
  try {
    if (j.contains("k")) f.k = j.at("k").get<int>();
    if (!j.contains("eps")) throw Error(ErrorCode::InputError, "family needs an eps list");
    f.eps = j.at("eps").get<std::vector<double>>();
    if (j.contains("normalization")) f.normalization = parse_normalization(j.at("normalization").get<std::string>());
    if (j.contains("alpha")) f.alpha = j.at("alpha").get<double>();
    if (j.contains("base_radius")) f.base_radius = j.at("base_radius").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("bad family field: ") + e.what());
  }
  return f;
}

std::vector<FamilyMember> family_members(const PerturbationFamily& family) {
  if (family.k < 1) throw Error(ErrorCode::InputError, "mode k must be at least 1");
  if (!(family.alpha > 0.0 && family.alpha <= 1.0)) throw Error(ErrorCode::InputError, "alpha must lie in (0, 1]");
  if (family.eps.empty()) throw Error(ErrorCode::InputError, "empty amplitude list");
  for (std::size_t i = 1; i < family.eps.size(); ++i)
    if (!(family.eps[i] > family.eps[i - 1]))
      throw Error(ErrorCode::InputError, "amplitudes must be strictly increasing");
  std::vector<FamilyMember> out;
  for (double e : family.eps) {
    DomainSpec spec;
    spec.base_radius = family.base_radius;
    spec.fourier_cos.assign(family.k, 0.0);
    spec.fourier_cos[family.k - 1] = e;
    spec.normalize_volume = has_volume(family.normalization);
    spec.recenter = has_recenter(family.normalization);
    spec.label = "cos" + std::to_string(family.k) + ":" + fmt(e);
    out.push_back({e, build_domain(spec)});
  }
  return out;
}

ComputeOptions ComputeOptions::refined() const {
  ComputeOptions r = *this;
  r.steklov.truncation *= 2;
  r.steklov.boundary *= 2;
  r.stein.collocation *= 2;
  r.stein.n_theta *= 2;
  r.stein.n_radial *= 2;
  r.fraenkel_grid *= 2;
  r.oracle_nodes = std::min(2 * oracle_nodes, 400);
  return r;
}

TheoremId parse_theorem(const std::string& id) {
  if (id == "thm-main") return TheoremId::Main;
  if (id == "thm-kernel") return TheoremId::Kernel;
  if (id == "thm-bw") return TheoremId::BrockWeinstock;
  if (id == "prop-steklov") return TheoremId::SteklovConstraint;
  if (id == "prop-combined") return TheoremId::Combined;
  throw Error(ErrorCode::InputError, "unknown theorem id '" + id + "'");
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Main: return "thm-main";
    case TheoremId::Kernel: return "thm-kernel";
    case TheoremId::BrockWeinstock: return "thm-bw";
    case TheoremId::SteklovConstraint: return "prop-steklov";
    case TheoremId::Combined: return "prop-combined";
  }
  return "thm-main";
}

bool boundary_centered(const GeometricFunctionals& g) {
  return (g.barycenter * g.perimeter).norm() <= kCenterTol;
}

InequalityReport verify_inequality(const PerturbationFamily& family, TheoremId theorem, const ComputeOptions& opt) {
  const bool need_volume = theorem == TheoremId::BrockWeinstock || theorem == TheoremId::Combined;
  const bool need_recenter = theorem == TheoremId::Kernel || theorem == TheoremId::SteklovConstraint;
  if ((need_volume && !has_volume(family.normalization)) || (need_recenter && !has_recenter(family.normalization)))
    throw Error(ErrorCode::NormalizationMissing,
                to_string(theorem) + " needs " + (need_volume ? "volume" : "recenter") + " normalization");
  return verify_inequality(family_members(family), family.normalization, theorem, family.alpha, opt);
}

InequalityReport verify_inequality(const std::vector<FamilyMember>& members, FamilyNormalization normalization,
                                   TheoremId theorem, double alpha, const ComputeOptions& opt) {
  if (members.empty()) throw Error(ErrorCode::InputError, "no family members");
  const bool need_volume = theorem == TheoremId::BrockWeinstock || theorem == TheoremId::Combined;
  const bool need_recenter = theorem == TheoremId::Kernel || theorem == TheoremId::SteklovConstraint;
  if ((need_volume && !has_volume(normalization)) || (need_recenter && !has_recenter(normalization)))
    throw Error(ErrorCode::NormalizationMissing,
                to_string(theorem) + " needs " + (need_volume ? "volume" : "recenter") + " normalization");

  InequalityReport rep;
  rep.theorem = theorem;
  rep.alpha = alpha;
  rep.z_method = opt.lp_oracle ? "lp-oracle" : "dictionary";
  const bool upper = theorem == TheoremId::Main || theorem == TheoremId::Kernel;
  rep.c_emp_rule = upper ? "sup" : "inf";

  unsigned needs = kZ;
  switch (theorem) {
    case TheoremId::Main: needs |= kDeficits; rep.aux_name = "d1"; break;
    case TheoremId::Kernel: needs |= kStein; rep.aux_name = "discrepancy_l2"; break;
    case TheoremId::BrockWeinstock: needs |= kSteklov | kGeo; rep.aux_name = "discrepancy_l2"; break;
    case TheoremId::SteklovConstraint: needs |= kSteklov | kGeo; rep.aux_name = "sigma1"; break;
    case TheoremId::Combined: needs |= kGeo | kDeficits; rep.aux_name = "identity_residual"; break;
  }

  std::vector<FamilyMember> work = members;
  if (theorem == TheoremId::SteklovConstraint) {
    // only members with sigma_1 >= 1 are in scope
    auto spectra = map_members(work, opt.parallel, [&](const FamilyMember& m) {
      return steklov_spectrum(m.domain, opt.steklov);
    });
    std::vector<FamilyMember> kept;
    for (std::size_t i = 0; i < work.size(); ++i)
      if (spectra[i].eigenvalues.at(1) >= 1.0 - kBwTol) kept.push_back(work[i]);
    if (kept.empty()) throw Error(ErrorCode::NotApplicable, "no member has sigma_1 >= 1");
    work = std::move(kept);
  }

  auto data = map_members(work, opt.parallel, [&](const FamilyMember& m) {
    MemberData d = compute_member(m, needs, alpha, opt);
    if (theorem == TheoremId::BrockWeinstock && boundary_centered(*d.geo)) d.stein = stein_kernel_solve(m.domain, opt.stein);
    return d;
  });

  for (const MemberData& d : data) {
    InequalityRow row;
    row.eps = d.eps;
    row.aux = kNaN;
    const double z = d.z->lower_bound;
    switch (theorem) {
      case TheoremId::Main:
        row.lhs = z;
        row.core = d.deficits->osc_l1;
        row.aux = d.deficits->d1;
        break;
      case TheoremId::Kernel:
        row.lhs = z;
        row.core = d.stein->discrepancy_l1;
        row.aux = d.stein->discrepancy_l2;
        break;
      case TheoremId::BrockWeinstock: {
        const double s1 = d.steklov->eigenvalues.at(1);
        const double vol = d.geo->volume;
        row.lhs = d.steklov->c_bw - 1.0;
        row.core = z * z / (2.0 * vol);
        if (s1 > 1.0 + kBwTol) {
          row.holds = false;
          row.note = "sigma_1 = " + fmt(s1) + " exceeds 1";
        }
        if (d.stein) {
          row.aux = d.stein->discrepancy_l2;
          const double bound = row.lhs * 2.0 * vol + kChainTol;
          if (row.aux > bound) {
            row.holds = false;
            row.note += (row.note.empty() ? "" : "; ") + std::string("chain inequality fails");
          }
        } else {
          row.note = row.note.empty() ? "chain skipped: not centered" : row.note;
        }
        break;
      }
      case TheoremId::SteklovConstraint: {
        const double r = std::sqrt(d.geo->volume / M_PI);
        row.lhs = d.geo->perimeter - kTwoPi * r;
        row.core = z * z;
        row.aux = d.steklov->eigenvalues.at(1);
        if (row.lhs < -kBwTol) {
          row.holds = false;
          row.note = "perimeter below that of the equal-volume ball";
        }
        break;
      }
      case TheoremId::Combined: {
        const GeometricFunctionals& g = *d.geo;
        const double dv = 2.0 * g.volume;
        row.lhs = (g.perimeter - dv) + (g.momentum - dv);
        row.core = z * z;
        row.aux = std::abs(row.lhs - d.deficits->d2);
        if (row.aux > kIdentityTol) {
          row.holds = false;
          row.note = "combined identity residual " + fmt(row.aux);
        }
        if (boundary_centered(g) && g.momentum < dv - kIdentityTol) {
          row.holds = false;
          row.note += (row.note.empty() ? "" : "; ") + std::string("weighted isoperimetric direction fails");
        }
        break;
      }
    }
    if (!(std::isfinite(row.lhs) && std::isfinite(row.core))) {
      row.holds = false;
      row.note = "non-finite quantity";
      row.ratio = kNaN;
    } else if (row.core > kZeroCore) {
      row.ratio = row.lhs / row.core;
      if (!upper && row.lhs < -kBwTol) {
        row.holds = false;
        row.note += (row.note.empty() ? "" : "; ") + std::string("negative left-hand side");
      }
    } else {
      row.ratio = kNaN;
      // Z <= C core cannot hold for any finite C
      if (upper && row.lhs > kZeroLhs) {
        row.holds = false;
        row.note = "positive distance with vanishing right-hand side";
      }
    }
    if (!row.holds) rep.violations.push_back(fmt(row.eps) + ": " + row.note);
    rep.rows.push_back(row);
  }

  rep.pass = rep.violations.empty();
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    if (std::isnan(row.ratio)) continue;
    rep.c_emp_defined = true;
    rep.ratio_min = std::min(rep.ratio_min, row.ratio);
    rep.ratio_max = std::max(rep.ratio_max, row.ratio);
  }
  if (rep.c_emp_defined) {
    rep.c_emp = upper ? rep.ratio_max : rep.ratio_min;
  } else {
    rep.c_emp = rep.ratio_min = rep.ratio_max = kNaN;
  }
  return rep;
}

const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> names = {
      "one_minus_sigma1", "sigma1",         "c_bw_minus_one", "d1",          "d2",
      "osc_l1",           "osc_l2",         "discrepancy_l1", "discrepancy_l2", "z_lower",
      "z_lower_sq",       "fraenkel",       "deficit_perimeter", "deficit_momentum", "volume",
      "perimeter",        "momentum",       "c_gap"};
  return names;
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  fit.points = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    fit.slope = fit.intercept = fit.residual = kNaN;
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

SweepTable family_sweep(const PerturbationFamily& family, const std::vector<std::string>& quantities,
                        const ComputeOptions& opt) {
  if (family.eps.size() < 4) throw Error(ErrorCode::InputError, "a sweep needs at least 4 amplitudes");
  if (quantities.empty()) throw Error(ErrorCode::InputError, "no quantities selected");
  const auto& known = sweep_quantities();
  unsigned needs = 0;
  for (const auto& q : quantities) {
    if (std::find(known.begin(), known.end(), q) == known.end())
      throw Error(ErrorCode::InputError, "unknown quantity '" + q + "'");
    if (std::count(quantities.begin(), quantities.end(), q) > 1)
      throw Error(ErrorCode::InputError, "quantity '" + q + "' listed twice");
    if (q == "one_minus_sigma1" || q == "sigma1" || q == "c_bw_minus_one") needs |= kSteklov;
    else if (q == "d1" || q == "d2" || q == "osc_l1" || q == "osc_l2") needs |= kDeficits;
    else if (q == "discrepancy_l1" || q == "discrepancy_l2") needs |= kStein;
    else if (q == "z_lower" || q == "z_lower_sq") needs |= kZ;
    else if (q == "fraenkel") needs |= kFraenkel;
    else if (q == "c_gap") needs |= kOblique;
    else needs |= kGeo;
  }
  const auto members = family_members(family);
  auto data = map_members(members, opt.parallel,
                          [&](const FamilyMember& m) { return compute_member(m, needs, family.alpha, opt); });

  SweepTable table;
  table.k = family.k;
  std::map<std::string, std::vector<double>> series;
  for (const MemberData& d : data) {
    for (const auto& q : quantities) {
      double v = 0.0;
      if (q == "one_minus_sigma1") v = d.steklov->bw_deficit;
      else if (q == "sigma1") v = d.steklov->eigenvalues.at(1);
      else if (q == "c_bw_minus_one") v = d.steklov->c_bw - 1.0;
      else if (q == "d1") v = d.deficits->d1;
      else if (q == "d2") v = d.deficits->d2;
      else if (q == "osc_l1") v = d.deficits->osc_l1;
      else if (q == "osc_l2") v = d.deficits->osc_l2;
      else if (q == "discrepancy_l1") v = d.stein->discrepancy_l1;
      else if (q == "discrepancy_l2") v = d.stein->discrepancy_l2;
      else if (q == "z_lower") v = d.z->lower_bound;
      else if (q == "z_lower_sq") v = d.z->lower_bound * d.z->lower_bound;
      else if (q == "fraenkel") v = d.fraenkel->value;
      else if (q == "deficit_perimeter") v = d.geo->deficit_perimeter;
      else if (q == "deficit_momentum") v = d.geo->deficit_momentum;
      else if (q == "volume") v = d.geo->volume;
      else if (q == "perimeter") v = d.geo->perimeter;
      else if (q == "momentum") v = d.geo->momentum;
      else if (q == "c_gap") v = std::abs(d.oblique->c_star - d.oblique->mean_h);
      table.rows.push_back({family.k, d.eps, q, v});
      series[q].push_back(v);
    }
  }
  for (const auto& q : quantities) {
    SlopeFit fit = loglog_fit(family.eps, series[q]);
    fit.quantity = q;
    table.slopes.push_back(fit);
  }
  return table;
}

ExpansionSummary expansion_validator(int k, const std::vector<double>& eps) {
  if (k < 1) throw Error(ErrorCode::InputError, "mode k must be at least 1");
  if (eps.empty()) throw Error(ErrorCode::InputError, "empty amplitude list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < 0.0 || eps[i] > 0.1) throw Error(ErrorCode::InputError, "expansion amplitudes must lie in [0, 0.1]");
    if (i > 0 && !(eps[i] > eps[i - 1])) throw Error(ErrorCode::InputError, "amplitudes must be strictly increasing");
  }
  const double d = 2.0;
  ExpansionSummary out;
  out.k = k;
  out.difference_limit = -d * M_PI;
  const char* names[4] = {"volume", "perimeter", "momentum", "difference"};
  for (const char* n : names) out.reports.push_back({n, {}, 0.0, false, false});

  for (double e : eps) {
    const double c0 = -(d - 1.0) * e * e / 4.0;
    std::vector<double> a(k, 0.0);
    a[k - 1] = e;
    const StarDomain dom(1.0 + c0, a, {});
    const GeometricFunctionals g = geometric_functionals(dom);
    // circle integrals of the perturbation eps(theta) = e cos(k theta) + c0
    const double int_e = kTwoPi * c0;
    const double int_e2 = M_PI * e * e + kTwoPi * c0 * c0;
    const double int_grad2 = M_PI * k * k * e * e;
    const double exact[4] = {g.volume, g.perimeter, g.momentum, g.perimeter - g.momentum};
    const double pred[4] = {
        M_PI,
        kTwoPi + (d - 1.0) * int_e + 0.5 * (d - 1.0) * (d - 2.0) * int_e2 + 0.5 * int_grad2,
        kTwoPi + (d + 1.0) * int_e + 0.5 * d * (d + 1.0) * int_e2 + 0.5 * int_grad2,
        -d * int_e2,
    };
    for (int i = 0; i < 4; ++i) out.reports[i].entries.push_back({e, exact[i], pred[i], std::abs(exact[i] - pred[i])});
  }

  out.pass = true;
  for (auto& r : out.reports) {
    std::vector<double> x, y;
    bool all_small = true;
    for (const auto& en : r.entries) {
      if (en.eps <= 0.0) continue;
      if (en.residual > kExpansionFloor) all_small = false;
      if (en.residual > kExpansionFloor) {
        x.push_back(en.eps);
        y.push_back(en.residual);
      }
    }
    r.exact = all_small;
    if (all_small) {
      r.slope = std::numeric_limits<double>::infinity();
      r.pass = true;
    } else {
      r.slope = loglog_fit(x, y).slope;
      r.pass = x.size() >= 2 && r.slope >= kExpansionSlopeMin;
    }
    out.pass = out.pass && r.pass;
  }
  out.difference_ratio = kNaN;
  for (const auto& en : out.reports[3].entries) {
    if (en.eps > 0.0) {
      out.difference_ratio = en.exact / (en.eps * en.eps);
      break;
    }
  }
  return out;
}

DomainAnalysis analyze_domain(const DomainSpec& spec, double alpha, const ComputeOptions& opt) {
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  DomainAnalysis a;
  a.spec = spec;
  auto t = Clock::now();
  a.domain = build_domain(spec);
  a.timings["build"] = seconds(t);
  t = Clock::now();
  a.functionals = geometric_functionals(a.domain);
  a.deficits = boundary_deficits(a.domain);
  a.timings["functionals"] = seconds(t);
  t = Clock::now();
  a.steklov = steklov_spectrum(a.domain, opt.steklov);
  a.timings["steklov"] = seconds(t);
  t = Clock::now();
  a.zolotarev = z_estimate(a.domain, alpha, opt);
  a.timings["zolotarev"] = seconds(t);
  t = Clock::now();
  a.fraenkel = fraenkel_asymmetry(a.domain, opt.fraenkel_grid);
  a.timings["fraenkel"] = seconds(t);
  a.centered = boundary_centered(a.functionals);
  if (a.centered) {
    t = Clock::now();
    const SteinKernelResult s = stein_kernel_solve(a.domain, opt.stein);
    a.discrepancy_l1 = s.discrepancy_l1;
    a.discrepancy_l2 = s.discrepancy_l2;
    a.timings["stein"] = seconds(t);
  }
  return a;
}

}  // namespace steinshape
