#include "su2/errors.hpp"
#include "su2/half_index.hpp"

namespace su2 {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NearZero: return "NearZero";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::BandLimitExceeded: return "BandLimitExceeded";
    case ErrorCode::ExactnessGateFailed: return "ExactnessGateFailed";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string HalfIndex::str() const {
  if (doubled % 2 == 0) return std::to_string(doubled / 2);
  return std::to_string(doubled) + "/2";
}

void require_order(int two_ell, int two_m) {
  if (!valid_order(two_ell, two_m)) {
    throw Error(ErrorCode::InvalidIndex,
                "order " + HalfIndex(two_m).str() + " invalid for degree " + HalfIndex(two_ell).str());
  }
}

void require_triple(int two_ell, int two_m, int two_s) {
  require_order(two_ell, two_m);
  require_order(two_ell, two_s);
}

}  // namespace su2
