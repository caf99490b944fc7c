#include "secgame/error.hpp"

namespace secgame {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::EmptyVulnerableUniverse: return "EmptyVulnerableUniverse";
    case ErrorKind::NotInIncreasedSet: return "NotInIncreasedSet";
    case ErrorKind::BoundaryParameters: return "BoundaryParameters";
    case ErrorKind::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::BelowRange: return "BelowRange";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::TooManyVulnerable: return "TooManyVulnerable";
  }
  return "Unknown";
}

}  // namespace secgame
