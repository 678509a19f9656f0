#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/bounds.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/search.hpp"
#include "comp_dof/simulator.hpp"
#include "comp_dof/zf_scheme.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace comp_dof::io {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const ChannelTopology& topology);
ChannelTopology topology_from_json(const Json& j);

Json to_json(const MessageAssignment& assignment);
MessageAssignment assignment_from_json(const Json& j);

Json to_json(const SchemePlan& plan);
SchemePlan plan_from_json(const Json& j);

Json to_json(const WitnessRecord& witness);
WitnessRecord witness_from_json(const Json& j);

Json to_json(const DofBound& bound);
DofBound bound_from_json(const Json& j);

Json to_json(const TauValue& tau);

Json to_json(const ReductionResult& reduction);
Json to_json(const FeasibilityReport& report);

Json to_json(const SearchResult& result);
SearchResult search_result_from_json(const Json& j);

Json to_json(const InterferenceReport& report);

Json to_json(const ChannelRealization& realization);
ChannelRealization realization_from_json(const Json& j);

/// K rows of K coefficients; row r holds H[r][1..K].
std::string realization_to_csv(const ChannelRealization& realization);

Json to_json(const ReconstructionPlan& plan);
Json to_json(const ReconstructionResult& result);

/// Rows "message,tx,coefficient" with a header line.
std::string beams_to_csv(const BeamDesign& beams);
BeamDesign beams_from_csv(const std::string& text, int K);

/// Rows "user,P_dB,rate,slope"; slope is empty when not estimated.
std::string rates_to_csv(const RateSamples& samples);

/// Shortest text that parses back to exactly `value` (at most 17 significant digits).
std::string format_double(double value);

/// Canonical text for artifacts: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace comp_dof::io
