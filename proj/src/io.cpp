#include "comp_dof/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace comp_dof::io {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed ") + what + ": " + e.what());
  }
}

Json sets_to_json(const std::vector<IndexSet>& sets) {
  Json arr = Json::array();
  for (const auto& s : sets) arr.push_back(s);
  return arr;
}

}  // namespace

Json to_json(const Rational& r) { return Json{{"num", r.numerator()}, {"den", r.denominator()}}; }

Rational rational_from_json(const Json& j) {
  return guarded("rational", [&] {
    return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
  });
}

Json to_json(const ChannelTopology& t) {
  Json j{{"kind", to_string(t.kind())}, {"K", t.users()}};
  if (t.is_local()) j["L"] = t.interferers();
  return j;
}

ChannelTopology topology_from_json(const Json& j) {
  return guarded("topology", [&] {
    const auto kind = connectivity_from_string(j.at("kind").get<std::string>());
    return build_topology(kind, j.at("K").get<int>(), j.value("L", 0));
  });
}

Json to_json(const MessageAssignment& a) { return Json{{"K", a.users()}, {"sets", sets_to_json(a.sets())}}; }

MessageAssignment assignment_from_json(const Json& j) {
  return guarded("assignment", [&] {
    return MessageAssignment(j.at("K").get<int>(), j.at("sets").get<std::vector<IndexSet>>());
  });
}

Json to_json(const SchemePlan& plan) {
  Json clusters = Json::array();
  for (const auto& c : plan.clusters)
    clusters.push_back(Json{{"offset", c.offset},
                            {"S1", c.S1},
                            {"S2", c.S2},
                            {"inactive_rx", c.inactive_rx},
                            {"silent_tx", c.silent_tx}});
  Json cancel = Json::object();
  for (const auto& [i, c] : plan.cancel_sets) cancel[std::to_string(i)] = c;
  return Json{{"K", plan.K},           {"M", plan.M},
              {"L", plan.L},           {"shift", plan.shift},
              {"clusters", clusters},  {"assignment", to_json(plan.assignment)},
              {"cancel_sets", cancel}};
}

SchemePlan plan_from_json(const Json& j) {
  return guarded("plan", [&] {
    SchemePlan plan;
    plan.K = j.at("K").get<int>();
    plan.M = j.at("M").get<int>();
    plan.L = j.at("L").get<int>();
    plan.shift = j.value("shift", 0);
    for (const auto& c : j.at("clusters"))
      plan.clusters.push_back(Cluster{c.at("offset").get<int>(), c.at("S1").get<IndexSet>(),
                                      c.at("S2").get<IndexSet>(), c.at("inactive_rx").get<IndexSet>(),
                                      c.at("silent_tx").get<IndexSet>()});
    plan.assignment = assignment_from_json(j.at("assignment"));
    for (const auto& [key, value] : j.at("cancel_sets").items())
      plan.cancel_sets[std::stoi(key)] = value.get<std::vector<int>>();
    return plan;
  });
}

Json to_json(const WitnessRecord& w) {
  Json j{{"S", w.S}, {"C_S", w.carried}};
  if (w.m3) j["m3"] = Json{{"x1", w.m3->x1}, {"x2", w.m3->x2}, {"x3", w.m3->x3}};
  return j;
}

WitnessRecord witness_from_json(const Json& j) {
  return guarded("witness", [&] {
    WitnessRecord w{j.at("S").get<IndexSet>(), j.at("C_S").get<IndexSet>(), std::nullopt};
    if (j.contains("m3")) {
      const auto& m = j.at("m3");
      w.m3 = M3Counters{m.at("x1").get<int>(), m.at("x2").get<int>(), m.at("x3").get<int>()};
    }
    return w;
  });
}

Json to_json(const DofBound& b) {
  Json j{{"value_num", b.value.numerator()}, {"value_den", b.value.denominator()}, {"method", to_string(b.method)}};
  if (b.witness) {
    j["witness_S"] = b.witness->S;
    j["witness_CS"] = b.witness->carried;
    if (b.witness->m3) j["m3"] = Json{{"x1", b.witness->m3->x1}, {"x2", b.witness->m3->x2}, {"x3", b.witness->m3->x3}};
  }
  return j;
}

DofBound bound_from_json(const Json& j) {
  return guarded("bound", [&] {
    DofBound b;
    b.value = Rational(j.at("value_num").get<std::int64_t>(), j.at("value_den").get<std::int64_t>());
    const auto method = j.at("method").get<std::string>();
    if (method == "subset_exact")
      b.method = BoundMethod::SubsetExact;
    else if (method == "subset_greedy")
      b.method = BoundMethod::SubsetGreedy;
    else if (method == "closed_form")
      b.method = BoundMethod::ClosedForm;
    else if (method == "pairwise")
      b.method = BoundMethod::Pairwise;
    else
      throw Error(ErrorCode::SchemaViolation, "unknown bound method '" + method + "'");
    if (j.contains("witness_S")) {
      Json w{{"S", j.at("witness_S")}, {"C_S", j.at("witness_CS")}};
      if (j.contains("m3")) w["m3"] = j.at("m3");
      b.witness = witness_from_json(w);
    }
    return b;
  });
}

Json to_json(const TauValue& tau) { return Json{{"value", to_json(tau.value)}, {"relation", to_string(tau.relation)}}; }

Json to_json(const ReductionResult& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(Json{{"message", v.message}, {"transmitter", v.transmitter}});
  return Json{{"assignment", to_json(r.assignment)}, {"envelope_violations", violations}};
}

Json to_json(const FeasibilityReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations)
    violations.push_back(Json{{"message", v.message},
                              {"reached_active", v.reached_active},
                              {"transmit_set_size", v.transmit_set_size},
                              {"reason", to_string(v.reason)}});
  return Json{{"feasible", report.feasible}, {"violations", violations}};
}

Json to_json(const SearchResult& r) {
  return Json{{"value", r.value},
              {"witness_sets", sets_to_json(r.witness.sets())},
              {"active", r.active},
              {"nodes", r.nodes_explored}};
}

SearchResult search_result_from_json(const Json& j) {
  return guarded("search result", [&] {
    SearchResult r;
    r.value = j.at("value").get<int>();
    auto sets = j.at("witness_sets").get<std::vector<IndexSet>>();
    const int K = static_cast<int>(sets.size());
    r.witness = MessageAssignment(K, std::move(sets));
    r.active = j.at("active").get<IndexSet>();
    r.nodes_explored = j.at("nodes").get<std::uint64_t>();
    return r;
  });
}

Json to_json(const InterferenceReport& report) {
  Json per_rx = Json::array();
  for (const auto& r : report.per_rx)
    per_rx.push_back(Json{{"rx", r.rx}, {"absolute", r.absolute}, {"relative", r.relative}, {"own_gain", r.own_gain}});
  return Json{{"max_residual", report.max_residual},
              {"max_relative_residual", report.max_relative_residual},
              {"min_own_gain", report.min_own_gain},
              {"structural_silence", report.structural_silence},
              {"per_rx", per_rx}};
}

Json to_json(const ChannelRealization& r) {
  return Json{{"topology", to_json(r.topology())}, {"seed", r.seed()}, {"coefficients", r.coefficients()}};
}

ChannelRealization realization_from_json(const Json& j) {
  return guarded("realization", [&] {
    return ChannelRealization(topology_from_json(j.at("topology")), j.at("coefficients").get<std::vector<double>>(),
                              j.value("seed", std::uint64_t{0}));
  });
}

Json to_json(const ReconstructionPlan& plan) {
  Json steps = Json::array();
  for (const auto& s : plan.steps) steps.push_back(Json{{"target", s.target}, {"via", s.via}, {"known", s.known}});
  Json noise = Json::object();
  for (const auto& [target, coeffs] : plan.noise_coefficients) {
    Json c = Json::object();
    for (const auto& [z, v] : coeffs) c[std::to_string(z)] = v;
    noise[std::to_string(target)] = c;
  }
  return Json{{"K", plan.K},
              {"M", plan.M},
              {"used_rx", plan.used_rx},
              {"given_tx", plan.given_tx},
              {"steps", steps},
              {"noise_coefficients", noise}};
}

Json to_json(const ReconstructionResult& result) {
  Json estimates = Json::object(), residuals = Json::object();
  for (const auto& [k, v] : result.estimates) estimates[std::to_string(k)] = v;
  for (const auto& [k, v] : result.residuals) residuals[std::to_string(k)] = v;
  return Json{{"estimates", estimates}, {"residuals", residuals}};
}

std::string format_double(double value) {
  char buf[40];
  const auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
  return std::string(buf, end);
}

std::string realization_to_csv(const ChannelRealization& realization) {
  std::ostringstream os;
  const int K = realization.users();
  for (int rx = 1; rx <= K; ++rx)
    for (int tx = 1; tx <= K; ++tx) os << format_double(realization.h(rx, tx)) << (tx == K ? '\n' : ',');
  return os.str();
}

std::string beams_to_csv(const BeamDesign& beams) {
  std::ostringstream os;
  os << "message,tx,coefficient\n";
  for (const auto& [i, beam] : beams.beams)
    for (const auto& [tx, c] : beam.coefficients) os << i << ',' << tx << ',' << format_double(c) << '\n';
  return os.str();
}

BeamDesign beams_from_csv(const std::string& text, int K) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "message,tx,coefficient")
    throw Error(ErrorCode::SchemaViolation, "beams CSV must start with 'message,tx,coefficient'");
  BeamDesign design;
  design.K = K;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    int message = 0, tx = 0;
    double c = 0.0;
    char comma1 = 0, comma2 = 0;
    std::istringstream ls(line);
    if (!(ls >> message >> comma1 >> tx >> comma2 >> c) || comma1 != ',' || comma2 != ',')
      throw Error(ErrorCode::SchemaViolation, "beams CSV row " + std::to_string(row) + " is malformed");
    if (message < 1 || message > K || tx < 1 || tx > K)
      throw Error(ErrorCode::IndexOutOfRange, "beams CSV row " + std::to_string(row) + " index out of range");
    design.beams[message].coefficients[tx] = c;
  }
  // The base transmitter is the one carrying the unit coefficient.
  for (auto& [i, beam] : design.beams) {
    beam.base = beam.coefficients.begin()->first;
    for (const auto& [tx, c] : beam.coefficients)
      if (c == 1.0) {
        beam.base = tx;
        break;
      }
  }
  return design;
}

std::string rates_to_csv(const RateSamples& samples) {
  std::ostringstream os;
  os << "user,P_dB,rate,slope\n";
  for (std::size_t u = 0; u < samples.rates.size(); ++u)
    for (std::size_t k = 0; k < samples.powers.size(); ++k) {
      os << u + 1 << ',' << format_double(10.0 * std::log10(samples.powers[k])) << ','
         << format_double(samples.rates[u][k]) << ',';
      if (!samples.slopes.empty()) os << format_double(samples.slopes[u]);
      os << '\n';
    }
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace comp_dof::io
