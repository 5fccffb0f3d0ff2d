#include "tdsp/errors.hpp"

namespace tdsp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::InvalidEdge: return "invalid-edge";
    case ErrorKind::UnsupportedUtility: return "unsupported-utility";
    case ErrorKind::UnreachableDestination: return "unreachable-destination";
    case ErrorKind::InconsistentNetwork: return "inconsistent-network";
    case ErrorKind::CyclicNetwork: return "cyclic-network";
    case ErrorKind::MissingNode: return "missing-node";
    case ErrorKind::TooManyPaths: return "too-many-paths";
    case ErrorKind::LabelCapExceeded: return "label-cap-exceeded";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "unknown";
}

}  // namespace tdsp
