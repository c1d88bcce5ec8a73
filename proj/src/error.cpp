#include "steinshape/error.hpp"

namespace steinshape {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RecenterFailed: return "RecenterFailed";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotOblique: return "NotOblique";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::SolverStall: return "SolverStall";
    case ErrorCode::ReflectionFailed: return "ReflectionFailed";
    case ErrorCode::NormalizationMissing: return "NormalizationMissing";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace steinshape
