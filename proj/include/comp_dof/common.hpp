#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace comp_dof {

/// Exact rational used for every DoF value the library reports.
using Rational = boost::rational<std::int64_t>;

/// Sorted, duplicate-free list of 1-based user/transmitter/receiver indices.
using IndexSet = std::vector<int>;

enum class ErrorCode {
  InvalidK,
  InvalidL,
  InvalidM,
  IndexOutOfRange,
  TooFewUsers,
  IaRegime,
  UnsupportedTopology,
  TooLargeForExact,
  Infeasible,
  UnknownSetting,
  CooperationNotOne,
  SingularChannel,
  LimitExceeded,
  InsufficientSweep,
  PowerViolation,
  SchemaViolation,
  UnknownStrategy,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a stable code. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Sorts and deduplicates in place.
IndexSet normalized(IndexSet s);

bool contains(const IndexSet& s, int value);

/// Inclusive integer range [lo, hi] clipped to [1, K].
IndexSet clipped_range(int lo, int hi, int K);

}  // namespace comp_dof
