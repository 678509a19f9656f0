#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace comp_dof {

enum class Strategy { Spiral, Scheme, CustomFile };

std::string to_string(Strategy strategy);

/// Schema failure located by a JSON pointer such as "/topology/L".
class SchemaError : public Error {
 public:
  SchemaError(ErrorCode code, std::string pointer, const std::string& what);
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct ExperimentConfig {
  ChannelTopology topology;
  int M = 1;
  Strategy strategy = Strategy::Scheme;
  std::string assignment_file;
  std::uint64_t seed = 0;
  std::string output;
  /// Command options; keys and value types are checked by parse_config.
  nlohmann::json options = nlohmann::json::object();
};

/// Validates a JSON document against the experiment schema. Unknown fields
/// are rejected.
ExperimentConfig parse_config(const std::string& text);

MessageAssignment build_assignment(const ExperimentConfig& config);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs `comp_dof <command> ...`; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace comp_dof
