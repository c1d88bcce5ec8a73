#pragma once

#include <string>

#include <json.hpp>

#include "steinshape/star_domain.hpp"

namespace steinshape {

/// Reads a domain description. Recognized keys: dimension, base_radius,
/// fourier_cos, fourier_sin, normalize_volume, recenter, label. Unknown keys,
/// wrong types and malformed files raise InputError.
DomainSpec parse_domain_spec(const nlohmann::json& j);
DomainSpec load_domain_spec(const std::string& path);

nlohmann::ordered_json to_json(const DomainSpec& spec);

/// Spec of an already-built domain (no normalization flags set).
DomainSpec spec_of(const StarDomain& domain);

/// Parses a JSON file, throwing InputError on I/O or syntax problems.
nlohmann::json read_json_file(const std::string& path);

}  // namespace steinshape
