#include "steinshape/config.hpp"

#include <fstream>
#include <set>

#include "steinshape/error.hpp"

namespace steinshape {

namespace {

const std::set<std::string> kKeys = {"dimension",        "base_radius", "fourier_cos", "fourier_sin",
                                     "normalize_volume", "recenter",    "label"};

std::vector<double> read_coeffs(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw Error(ErrorCode::InputError, std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::InputError, std::string(key) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

DomainSpec parse_domain_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InputError, "domain config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw Error(ErrorCode::InputError, "unknown config key '" + key + "'");
  }
  DomainSpec spec;
  if (j.contains("dimension")) {
    if (!j["dimension"].is_number_integer()) throw Error(ErrorCode::InputError, "dimension must be an integer");
    spec.dimension = j["dimension"].get<int>();
  }
  if (j.contains("base_radius")) {
    if (!j["base_radius"].is_number()) throw Error(ErrorCode::InputError, "base_radius must be a number");
    spec.base_radius = j["base_radius"].get<double>();
  }
  if (j.contains("fourier_cos")) spec.fourier_cos = read_coeffs(j["fourier_cos"], "fourier_cos");
  if (j.contains("fourier_sin")) spec.fourier_sin = read_coeffs(j["fourier_sin"], "fourier_sin");
  for (const char* flag : {"normalize_volume", "recenter"}) {
    if (!j.contains(flag)) continue;
    if (!j[flag].is_boolean()) throw Error(ErrorCode::InputError, std::string(flag) + " must be a boolean");
    (std::string(flag) == "recenter" ? spec.recenter : spec.normalize_volume) = j[flag].get<bool>();
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw Error(ErrorCode::InputError, "label must be a string");
    spec.label = j["label"].get<std::string>();
  }
  return spec;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, "malformed JSON in '" + path + "': " + e.what());
  }
}

DomainSpec load_domain_spec(const std::string& path) { return parse_domain_spec(read_json_file(path)); }

nlohmann::ordered_json to_json(const DomainSpec& spec) {
  nlohmann::ordered_json j;
  j["dimension"] = spec.dimension;
  j["base_radius"] = spec.base_radius;
  j["fourier_cos"] = spec.fourier_cos;
  j["fourier_sin"] = spec.fourier_sin;
  j["normalize_volume"] = spec.normalize_volume;
  j["recenter"] = spec.recenter;
  j["label"] = spec.label;
  return j;
}

DomainSpec spec_of(const StarDomain& domain) {
  DomainSpec spec;
  spec.base_radius = domain.base_radius();
  spec.fourier_cos = domain.cos_coeffs();
  spec.fourier_sin = domain.sin_coeffs();
  spec.label = domain.label();
  return spec;
}

}  // namespace steinshape
