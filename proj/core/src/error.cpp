#include "nlstab/error.hpp"

namespace nlstab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPole: return "pole";
    case ErrorCode::kParameterDomain: return "parameter_domain";
    case ErrorCode::kInvalidRadius: return "invalid_radius";
    case ErrorCode::kEpsOutOfRange: return "eps_out_of_range";
    case ErrorCode::kProjectionNonconvergence: return "projection_nonconvergence";
    case ErrorCode::kPointTooCloseToBoundary: return "point_too_close_to_boundary";
    case ErrorCode::kErosionTooLarge: return "erosion_too_large";
    case ErrorCode::kNonpositiveData: return "nonpositive_data";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace nlstab
