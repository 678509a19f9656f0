#include "comp_dof/cli.hpp"

#include "comp_dof/bounds.hpp"
#include "comp_dof/io.hpp"
#include "comp_dof/search.hpp"
#include "comp_dof/simulator.hpp"
#include "comp_dof/zf_scheme.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace comp_dof {

using nlohmann::json;

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Spiral: return "spiral";
    case Strategy::Scheme: return "scheme";
    case Strategy::CustomFile: return "custom-file";
  }
  return "scheme";
}

SchemaError::SchemaError(ErrorCode code, std::string pointer, const std::string& what)
    : Error(code, "at " + (pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(std::move(pointer)) {}

namespace {

[[noreturn]] void schema_fail(const std::string& pointer, const std::string& what) {
  throw SchemaError(ErrorCode::SchemaViolation, pointer, what);
}

void reject_unknown(const json& object, const std::string& pointer, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) schema_fail(pointer + "/" + key, "unknown field");
  }
}

long long require_integer(const json& object, const std::string& key, const std::string& pointer, long long min) {
  if (!object.contains(key)) schema_fail(pointer + "/" + key, "required field missing");
  const auto& v = object.at(key);
  if (!v.is_number_integer()) schema_fail(pointer + "/" + key, "expected an integer");
  const auto value = v.get<long long>();
  if (value < min) schema_fail(pointer + "/" + key, "must be >= " + std::to_string(min));
  return value;
}

using OptionCheck = std::function<void(const json&, const std::string&)>;

OptionCheck integer_at_least(long long min) {
  return [min](const json& v, const std::string& p) {
    if (!v.is_number_integer() || v.get<long long>() < min) schema_fail(p, "expected an integer >= " + std::to_string(min));
  };
}

OptionCheck one_of(std::vector<std::string> names) {
  return [names](const json& v, const std::string& p) {
    if (!v.is_string() || std::find(names.begin(), names.end(), v.get<std::string>()) == names.end())
      schema_fail(p, "unexpected value");
  };
}

OptionCheck number_array(std::size_t exact_size) {
  return [exact_size](const json& v, const std::string& p) {
    if (!v.is_array() || (exact_size && v.size() != exact_size)) schema_fail(p, "expected an array of numbers");
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_number()) schema_fail(p + "/" + std::to_string(k), "expected a number");
  };
}

OptionCheck index_array() {
  return [](const json& v, const std::string& p) {
    if (!v.is_array()) schema_fail(p, "expected an array of indices");
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_number_integer() || v[k].get<long long>() < 1)
        schema_fail(p + "/" + std::to_string(k), "expected a positive integer");
  };
}

OptionCheck boolean() {
  return [](const json& v, const std::string& p) {
    if (!v.is_boolean()) schema_fail(p, "expected a boolean");
  };
}

const std::map<std::string, OptionCheck>& option_schema() {
  static const std::map<std::string, OptionCheck> schema{
      {"shift", integer_at_least(0)},
      {"sessions", integer_at_least(1)},
      {"limit", integer_at_least(1)},
      {"bound", one_of({"subset", "greedy", "witness", "m3", "nocoop"})},
      {"sweep_db", number_array(3)},
      {"powers", number_array(0)},
      {"trials", integer_at_least(1)},
      {"noise_seed", integer_at_least(0)},
      {"active", index_array()},
      {"unrestricted", boolean()},
  };
  return schema;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_fail("", "expected an object");
  reject_unknown(root, "", {"topology", "M", "strategy", "assignment_file", "seed", "output", "options"});

  ExperimentConfig config;
  if (!root.contains("topology")) schema_fail("/topology", "required field missing");
  const auto& t = root.at("topology");
  if (!t.is_object()) schema_fail("/topology", "expected an object");
  reject_unknown(t, "/topology", {"kind", "K", "L"});
  if (!t.contains("kind") || !t.at("kind").is_string()) schema_fail("/topology/kind", "expected a string");
  Connectivity kind;
  try {
    kind = connectivity_from_string(t.at("kind").get<std::string>());
  } catch (const Error& e) {
    schema_fail("/topology/kind", e.what());
  }
  const auto K = require_integer(t, "K", "/topology", 1);
  long long L = 0;
  if (kind != Connectivity::FullyConnected) {
    L = require_integer(t, "L", "/topology", 0);
    if (L >= K) schema_fail("/topology/L", "L must be < K");
  } else if (t.contains("L")) {
    schema_fail("/topology/L", "fully connected topologies take no L");
  }
  config.topology = build_topology(kind, static_cast<int>(K), static_cast<int>(L));

  config.M = static_cast<int>(require_integer(root, "M", "", 1));

  if (root.contains("strategy")) {
    const auto& s = root.at("strategy");
    if (!s.is_string()) schema_fail("/strategy", "expected a string");
    const auto name = s.get<std::string>();
    if (name == "spiral")
      config.strategy = Strategy::Spiral;
    else if (name == "scheme")
      config.strategy = Strategy::Scheme;
    else if (name == "custom-file")
      config.strategy = Strategy::CustomFile;
    else
      throw SchemaError(ErrorCode::UnknownStrategy, "/strategy", "unknown strategy '" + name + "'");
  }
  if (root.contains("assignment_file")) {
    if (!root.at("assignment_file").is_string()) schema_fail("/assignment_file", "expected a string");
    config.assignment_file = root.at("assignment_file").get<std::string>();
  }
  if (config.strategy == Strategy::CustomFile && config.assignment_file.empty())
    schema_fail("/assignment_file", "required by strategy custom-file");
  if (root.contains("seed")) config.seed = static_cast<std::uint64_t>(require_integer(root, "seed", "", 0));
  if (root.contains("output")) {
    if (!root.at("output").is_string()) schema_fail("/output", "expected a string");
    config.output = root.at("output").get<std::string>();
  }
  if (root.contains("options")) {
    const auto& o = root.at("options");
    if (!o.is_object()) schema_fail("/options", "expected an object");
    const auto& schema = option_schema();
    for (const auto& [key, value] : o.items()) {
      const auto it = schema.find(key);
      if (it == schema.end()) schema_fail("/options/" + key, "unknown field");
      it->second(value, "/options/" + key);
    }
    config.options = o;
  }
  return config;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

}  // namespace

MessageAssignment build_assignment(const ExperimentConfig& config) {
  const int K = config.topology.users();
  switch (config.strategy) {
    case Strategy::Spiral:
      return spiral_assign(K, config.M);
    case Strategy::Scheme:
      if (!config.topology.is_local())
        throw Error(ErrorCode::UnsupportedTopology, "the scheme strategy needs a locally connected channel");
      return scheme_assign(K, config.M, config.topology.interferers(), config.options.value("shift", 0));
    case Strategy::CustomFile: {
      auto a = io::assignment_from_json(io::Json::parse(read_file(config.assignment_file)));
      if (a.users() != K) throw Error(ErrorCode::InvalidArgument, "assignment file disagrees on K");
      return a;
    }
  }
  throw Error(ErrorCode::UnknownStrategy, "unknown strategy");
}

namespace {

// Flags shared by every subcommand; they override fields of --config.
struct CommonFlags {
  std::string config_path;
  std::optional<int> K, M, L;
  std::optional<std::string> kind, strategy, assignment;
  std::optional<std::uint64_t> seed;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "experiment config JSON");
    app->add_option("--K", K, "number of users");
    app->add_option("--M", M, "cooperation order");
    app->add_option("--L", L, "interferers per receiver");
    app->add_option("--kind", kind, "full | local_original | local_shifted");
    app->add_option("--strategy", strategy, "spiral | scheme | custom-file");
    app->add_option("--assignment", assignment, "assignment JSON for custom-file");
    app->add_option("--seed", seed, "realization seed (default 0)");
    app->add_option("--out", out, "output path (default stdout)");
  }

  ExperimentConfig resolve(const json& extra_options) const {
    json root = config_path.empty() ? json::object() : json::parse(read_file(config_path));
    if (!root.is_object()) throw SchemaError(ErrorCode::SchemaViolation, "", "expected an object");
    if (K || L || kind) {
      json& t = root["topology"];
      if (!t.is_object()) t = json::object();
      if (kind) t["kind"] = *kind;
      if (!t.contains("kind")) t["kind"] = "local_shifted";
      if (K) t["K"] = *K;
      if (L) t["L"] = *L;
    }
    if (M) root["M"] = *M;
    if (strategy) root["strategy"] = *strategy;
    if (assignment) {
      root["assignment_file"] = *assignment;
      if (!strategy) root["strategy"] = "custom-file";
    }
    if (seed) root["seed"] = *seed;
    if (!out.empty()) root["output"] = out;
    if (!extra_options.empty()) {
      json& o = root["options"];
      if (!o.is_object()) o = json::object();
      for (const auto& [k, v] : extra_options.items()) o[k] = v;
    }
    return parse_config(root.dump());
  }
};

std::vector<double> parse_sweep(const std::string& text) {
  std::string s = text;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "dB") s.resize(s.size() - 2);
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad sweep '" + text + "'; expected first:last:step[dB]");
    }
  }
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "bad sweep '" + text + "'; expected first:last:step[dB]");
  return parts;
}

SchemePlan plan_for(const ExperimentConfig& config) {
  if (!config.topology.is_local())
    throw Error(ErrorCode::UnsupportedTopology, "the scheme needs a locally connected channel");
  return plan_clusters(config.topology.users(), config.M, config.topology.interferers(),
                       config.options.value("shift", 0));
}

TauValue tau_from_flags(const std::string& setting, int M, int L, const std::string& cooperation,
                        const std::string& quantity) {
  TauSetting s;
  if (setting == "full")
    s.channel = ChannelClass::Full;
  else if (setting == "local")
    s.channel = ChannelClass::Local;
  else
    throw Error(ErrorCode::UnknownSetting, "setting must be full or local");
  s.M = M;
  s.L = L;
  if (cooperation == "general")
    s.cooperation = CooperationClass::General;
  else if (cooperation == "local")
    s.cooperation = CooperationClass::Local;
  else
    throw Error(ErrorCode::UnknownSetting, "cooperation must be general or local");
  if (quantity == "dof")
    s.quantity = TauQuantity::Dof;
  else if (quantity == "zf")
    s.quantity = TauQuantity::ZeroForcing;
  else
    throw Error(ErrorCode::UnknownSetting, "quantity must be dof or zf");
  return closed_form_tau(s);
}

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degrees-of-freedom toolkit for cooperative transmission in interference networks", "comp_dof"};
  app.require_subcommand(1);
  std::map<std::string, CommonFlags> flags;
  std::function<void()> action;

  auto* assign = app.add_subcommand("assign", "emit the transmit sets of the configured strategy");
  flags["assign"].attach(assign);
  assign->callback([&] {
    action = [&] {
      const auto c = flags["assign"].resolve(json::object());
      write_text(c.output, io::dump(io::to_json(build_assignment(c))), out);
    };
  });

  auto* reduce = app.add_subcommand("reduce", "prune transmitters that cannot help their message");
  flags["reduce"].attach(reduce);
  reduce->callback([&] {
    action = [&] {
      const auto c = flags["reduce"].resolve(json::object());
      const auto r = reduce_assignment(build_assignment(c), c.topology, c.M);
      write_text(c.output, io::dump(io::to_json(r)), out);
    };
  });

  std::string bound_kind;
  std::string tau_setting = "local", tau_cooperation = "general", tau_quantity = "dof";
  int tau_M = 1, tau_L = 1;
  auto* bound = app.add_subcommand("bound", "upper bounds on the sum DoF of an assignment");
  flags["bound"].attach(bound);
  bound->add_option("method", bound_kind, "subset | greedy | witness | m3 | tau | nocoop")
      ->required()
      ->check(CLI::IsMember({"subset", "greedy", "witness", "m3", "tau", "nocoop"}));
  bound->add_option("--setting", tau_setting, "tau: full | local");
  bound->add_option("--cooperation", tau_cooperation, "tau: general | local");
  bound->add_option("--quantity", tau_quantity, "tau: dof | zf");
  bound->callback([&] {
    action = [&] {
      auto& f = flags["bound"];
      if (bound_kind == "tau") {
        const auto tau = tau_from_flags(tau_setting, f.M.value_or(1), f.L.value_or(1), tau_cooperation, tau_quantity);
        write_text(f.out, io::dump(io::to_json(tau)), out);
        return;
      }
      const auto c = f.resolve(json{{"bound", bound_kind}});
      const auto a = build_assignment(c);
      io::Json result;
      if (bound_kind == "subset") {
        result = io::to_json(subset_bound(a, SubsetMode::Exact));
      } else if (bound_kind == "greedy") {
        result = io::to_json(subset_bound(a, SubsetMode::Greedy));
      } else if (bound_kind == "nocoop") {
        result = io::to_json(no_coop_bound(c.topology, a));
      } else {
        const auto w = bound_kind == "m3" ? m3_witness(a) : greedy_witness(a, c.M);
        const int K = a.users();
        result = io::to_json(DofBound{Rational(witness_value(w, K)), w, BoundMethod::SubsetGreedy});
      }
      write_text(c.output, io::dump(result), out);
    };
  });

  auto* scheme = app.add_subcommand("scheme", "plan the clustered zero-forcing scheme");
  flags["scheme"].attach(scheme);
  std::optional<int> scheme_shift;
  scheme->add_option("--shift", scheme_shift, "cluster offset");
  scheme->callback([&] {
    action = [&] {
      json extra = json::object();
      if (scheme_shift) extra["shift"] = *scheme_shift;
      const auto c = flags["scheme"].resolve(extra);
      write_text(c.output, io::dump(io::to_json(plan_for(c))), out);
    };
  });

  std::string verify_plan, verify_beams_out;
  auto* verify = app.add_subcommand("verify", "design beams on a sampled channel and report residual interference");
  flags["verify"].attach(verify);
  verify->add_option("--plan", verify_plan, "plan JSON from `scheme`");
  verify->add_option("--beams-out", verify_beams_out, "write the beam coefficients as CSV");
  verify->callback([&] {
    action = [&] {
      auto& f = flags["verify"];
      SchemePlan plan;
      std::uint64_t seed = f.seed.value_or(0);
      std::string output = f.out;
      if (!verify_plan.empty()) {
        plan = io::plan_from_json(io::Json::parse(read_file(verify_plan)));
      } else {
        const auto c = f.resolve(json::object());
        plan = plan_for(c);
        seed = c.seed;
      }
      const auto realization = realize(plan.topology(), seed);
      const auto beams = design_beams(realization, plan);
      const auto report = verify_zero_interference(realization, plan, beams);
      if (!verify_beams_out.empty()) write_text(verify_beams_out, io::beams_to_csv(beams), out);
      io::Json j{{"seed", seed}, {"report", io::to_json(report)}};
      write_text(output, io::dump(j), out);
    };
  });

  std::string search_mode;
  std::optional<int> search_limit;
  bool search_unrestricted = false;
  auto* search = app.add_subcommand("search", "exhaustive maximum of zero-forcing active users");
  flags["search"].attach(search);
  search->add_option("mode", search_mode, "zf")->check(CLI::IsMember({"zf"}));
  search->add_option("--limit", search_limit, "largest K searched exhaustively (default 12)");
  search->add_flag("--unrestricted", search_unrestricted, "allow transmit sets outside the reduction envelope");
  search->callback([&] {
    action = [&] {
      json extra = json::object();
      if (search_limit) extra["limit"] = *search_limit;
      if (search_unrestricted) extra["unrestricted"] = true;
      const auto c = flags["search"].resolve(extra);
      SearchLimits limits;
      limits.max_users = c.options.value("limit", limits.max_users);
      limits.restrict_to_envelope = !c.options.value("unrestricted", false);
      const auto r = max_zf_dof(c.topology, c.M, limits);
      write_text(c.output, io::dump(io::to_json(r)), out);
    };
  });

  std::string sim_plan, sim_beams, sim_sweep = "30:60:10dB";
  int sim_trials = 1;
  auto* simulate = app.add_subcommand("simulate", "rates over a power sweep and DoF slope estimates (CSV)");
  flags["simulate"].attach(simulate);
  simulate->add_option("--plan", sim_plan, "plan JSON from `scheme`");
  simulate->add_option("--beams", sim_beams, "beam CSV; designed from the seed when omitted");
  simulate->add_option("--sweep", sim_sweep, "first:last:step in dB (default 30:60:10dB)");
  simulate->add_option("--trials", sim_trials, "realizations averaged per point")->check(CLI::PositiveNumber);
  simulate->callback([&] {
    action = [&] {
      auto& f = flags["simulate"];
      SchemePlan plan;
      std::uint64_t seed = f.seed.value_or(0);
      if (!sim_plan.empty()) {
        plan = io::plan_from_json(io::Json::parse(read_file(sim_plan)));
      } else {
        const auto c = f.resolve(json::object());
        plan = plan_for(c);
        seed = c.seed;
      }
      const auto sweep = parse_sweep(sim_sweep);
      SimulationConfig config{power_sweep_db(sweep[0], sweep[1], sweep[2]), sim_trials, seed};
      RateSamples samples;
      if (!sim_beams.empty()) {
        const auto realization = realize(plan.topology(), seed);
        const auto beams = io::beams_from_csv(read_file(sim_beams), plan.K);
        samples = simulate_rates(realization, plan, beams, config);
      } else {
        samples = simulate_plan(plan, config);
      }
      write_text(f.out, io::rates_to_csv(samples), out);
    };
  });

  std::uint64_t noise_seed = 1;
  std::vector<double> powers{1e2, 1e4, 1e6};
  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild transmit signals from a subset of outputs (L = 1)");
  flags["reconstruct"].attach(reconstruct);
  reconstruct->add_option("--noise-seed", noise_seed, "seed of the Gaussian noise draw");
  reconstruct->add_option("--powers", powers, "transmit powers (linear)");
  reconstruct->callback([&] {
    action = [&] {
      const auto c = flags["reconstruct"].resolve(json{{"noise_seed", noise_seed}, {"powers", powers}});
      const auto realization = realize(c.topology, c.seed);
      const auto plan = plan_wyner_reconstruction(realization, c.M);
      const int K = c.topology.users();
      std::mt19937_64 rng(c.options.value("noise_seed", std::uint64_t{1}));
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> z(static_cast<std::size_t>(K)), unit(static_cast<std::size_t>(K));
      for (auto& v : unit) v = normal(rng);
      for (auto& v : z) v = normal(rng);
      io::Json runs = io::Json::array();
      for (double P : c.options.value("powers", powers)) {
        std::vector<double> x(unit.size());
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sqrt(P) * unit[k];
        runs.push_back(io::Json{{"P", P}, {"result", io::to_json(wyner_reconstruct(realization, plan, x, z))}});
      }
      io::Json j{{"seed", c.seed}, {"plan", io::to_json(plan)}, {"runs", runs}};
      write_text(c.output, io::dump(j), out);
    };
  });

  auto* tau = app.add_subcommand("tau", "closed-form asymptotic per-user DoF");
  tau->add_option("--setting", tau_setting, "full | local")->required();
  tau->add_option("--M", tau_M, "cooperation order");
  tau->add_option("--L", tau_L, "interferers per receiver");
  tau->add_option("--cooperation", tau_cooperation, "general | local");
  tau->add_option("--quantity", tau_quantity, "dof | zf");
  tau->callback([&] {
    action = [&] {
      const auto v = tau_from_flags(tau_setting, tau_M, tau_L, tau_cooperation, tau_quantity);
      out << rational_text(v.value) << " (" << to_string(v.relation) << ")\n";
    };
  });

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace comp_dof
