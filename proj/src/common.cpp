#include "comp_dof/common.hpp"

#include <algorithm>

namespace comp_dof {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidL: return "InvalidL";
    case ErrorCode::InvalidM: return "InvalidM";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooFewUsers: return "TooFewUsers";
    case ErrorCode::IaRegime: return "IaRegime";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::TooLargeForExact: return "TooLargeForExact";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::UnknownSetting: return "UnknownSetting";
    case ErrorCode::CooperationNotOne: return "CooperationNotOne";
    case ErrorCode::SingularChannel: return "SingularChannel";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::InsufficientSweep: return "InsufficientSweep";
    case ErrorCode::PowerViolation: return "PowerViolation";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

IndexSet normalized(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool contains(const IndexSet& s, int value) {
  return std::binary_search(s.begin(), s.end(), value);
}

IndexSet clipped_range(int lo, int hi, int K) {
  IndexSet out;
  for (int v = std::max(lo, 1); v <= std::min(hi, K); ++v) out.push_back(v);
  return out;
}

}  // namespace comp_dof
