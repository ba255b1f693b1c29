#pragma once

// JSON scenario files for the uoi command line tool.
//
// {
//   "name": "A1",
//   "processes": [{"p": 0.05, "q": 0.2}, {"p": 0.2, "q": 0.4, "penalty": {"kind": "entropy"}}],
//   "penalty": {"kind": "mean-std", "alpha0": -1, "alpha1": 2, "beta": 0.5},
//   "policies": ["whittle", "myopic", "optimal"],
//   "horizon": 10000, "runs": 50, "seed": 1, "burn_in": 0,
//   "epsilon": 1e-9, "rvi_epsilon": 1e-9,
//   "output": "a1.csv", "dump_index": false, "debug_belief": false
// }
//
// Only "processes" is required. A per-process penalty overrides the
// top-level one, which defaults to entropy.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "uoi/sim.hpp"

namespace uoi::cli {

struct ScenarioFile {
  Scenario scenario;
  std::optional<std::string> output;
  bool dump_index = false;
  bool debug_belief = false;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void bad(const std::string& where, const std::string& msg) {
  fail(ErrorKind::invalid_input, where + ": " + msg);
}

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) bad(where + "." + k, "unknown key");
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

inline long long integer(const json& j, const std::string& where, long long min) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min) bad(where, "must be at least " + std::to_string(min));
  return v;
}

inline bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected true or false");
  return j.get<bool>();
}

inline Penalty penalty(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  if (!j.contains("kind")) bad(where + ".kind", "missing");
  if (!j["kind"].is_string()) bad(where + ".kind", "expected a string");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "entropy" || kind == "quadratic") {
    only_keys(j, where, {"kind"});
    return kind == "entropy" ? Penalty::entropy() : Penalty::quadratic();
  }
  if (kind == "mean-std") {
    only_keys(j, where, {"kind", "alpha0", "alpha1", "beta"});
    auto f = Penalty::mean_std();
    if (j.contains("alpha0")) f.alpha0 = number(j["alpha0"], where + ".alpha0");
    if (j.contains("alpha1")) f.alpha1 = number(j["alpha1"], where + ".alpha1");
    if (j.contains("beta")) f.beta = number(j["beta"], where + ".beta");
    if (!(f.beta >= 0.0)) bad(where + ".beta", "must be nonnegative for a concave penalty");
    return f;
  }
  if (kind == "reciprocal") {
    only_keys(j, where, {"kind", "c"});
    auto f = Penalty::reciprocal();
    if (j.contains("c")) f.c = number(j["c"], where + ".c");
    return f;
  }
  bad(where + ".kind", "unknown penalty '" + kind + "' (entropy, mean-std, quadratic, reciprocal)");
}

}  // namespace detail

inline ScenarioFile parse_scenario(const std::string& text, const std::string& source = "scenario") {
  using detail::bad;
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    fail(ErrorKind::invalid_input, source + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  const std::string root = "$";
  if (!j.is_object()) bad(root, "expected an object");
  detail::only_keys(j, root,
                    {"name", "processes", "penalty", "policies", "horizon", "runs", "seed", "burn_in",
                     "epsilon", "rvi_epsilon", "output", "dump_index", "debug_belief"});
  ScenarioFile f;
  auto& sc = f.scenario;

  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("$.name", "expected a string");
    sc.name = j["name"].get<std::string>();
    if (sc.name.find_first_of(",\n\r") != std::string::npos) bad("$.name", "must not contain commas or newlines");
  }
  Penalty shared = Penalty::entropy();
  if (j.contains("penalty")) shared = detail::penalty(j["penalty"], "$.penalty");

  if (!j.contains("processes")) bad("$.processes", "missing");
  const auto& ps = j["processes"];
  if (!ps.is_array() || ps.empty()) bad("$.processes", "expected a non-empty array");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = "$.processes[" + std::to_string(i) + "]";
    const auto& e = ps[i];
    if (!e.is_object()) bad(w, "expected an object");
    detail::only_keys(e, w, {"p", "q", "penalty"});
    if (!e.contains("p")) bad(w + ".p", "missing");
    if (!e.contains("q")) bad(w + ".q", "missing");
    const double p = detail::number(e["p"], w + ".p");
    const double q = detail::number(e["q"], w + ".q");
    if (!(p > 0.0 && p < 1.0)) bad(w + ".p", "must lie in (0,1)");
    if (!(q > 0.0 && q < 1.0)) bad(w + ".q", "must lie in (0,1)");
    if (std::abs(p + q - 1.0) < 1e-12) bad(w, "p + q = 1 makes the penalty constant; rejected");
    const Penalty h = e.contains("penalty") ? detail::penalty(e["penalty"], w + ".penalty") : shared;
    sc.processes.push_back({BanditParams(p, q), h});
  }

  if (j.contains("policies")) {
    const auto& pl = j["policies"];
    if (!pl.is_array() || pl.empty()) bad("$.policies", "expected a non-empty array");
    sc.policies.clear();
    for (std::size_t i = 0; i < pl.size(); ++i) {
      const std::string w = "$.policies[" + std::to_string(i) + "]";
      if (!pl[i].is_string()) bad(w, "expected a string");
      try {
        sc.policies.push_back(parse_policy(pl[i].get<std::string>()));
      } catch (const Error& err) {
        bad(w, err.what());
      }
    }
  }
  if (j.contains("horizon")) sc.sim.horizon = detail::integer(j["horizon"], "$.horizon", 1);
  if (j.contains("runs")) sc.sim.runs = static_cast<int>(detail::integer(j["runs"], "$.runs", 1));
  if (j.contains("burn_in")) sc.sim.burn_in = detail::integer(j["burn_in"], "$.burn_in", 0);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("$.seed", "expected a nonnegative integer");
    sc.sim.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("epsilon")) {
    sc.epsilon = detail::number(j["epsilon"], "$.epsilon");
    if (!(sc.epsilon > 0.0 && sc.epsilon < 0.5)) bad("$.epsilon", "must lie in (0, 0.5)");
  }
  if (j.contains("rvi_epsilon")) {
    sc.rvi_epsilon = detail::number(j["rvi_epsilon"], "$.rvi_epsilon");
    if (!(sc.rvi_epsilon > 0.0)) bad("$.rvi_epsilon", "must be positive");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) bad("$.output", "expected a string");
    f.output = j["output"].get<std::string>();
  }
  if (j.contains("dump_index")) f.dump_index = detail::boolean(j["dump_index"], "$.dump_index");
  if (j.contains("debug_belief")) f.debug_belief = detail::boolean(j["debug_belief"], "$.debug_belief");
  return f;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

/// Checks that need the whole scenario, after command line overrides.
inline void validate(const Scenario& sc) {
  for (auto k : sc.policies)
    if (k == PolicyKind::optimal && sc.processes.size() > 3)
      fail(ErrorKind::invalid_input, "$.policies: optimal needs at most 3 processes, got " +
                                         std::to_string(sc.processes.size()));
}

}  // namespace uoi::cli
