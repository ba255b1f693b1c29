#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uoi/sim.hpp"

namespace uoi {

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string fmt_num(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Metadata lines start with '#'; CSV readers can skip them as comments.
inline void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

inline Metadata scenario_metadata(const Scenario& sc) {
  Metadata m;
  m.emplace_back("scenario", sc.name);
  m.emplace_back("processes", std::to_string(sc.processes.size()));
  for (std::size_t j = 0; j < sc.processes.size(); ++j) {
    const auto& pr = sc.processes[j];
    m.emplace_back("process." + std::to_string(j + 1),
                   "p=" + fmt_num(pr.params.p()) + " q=" + fmt_num(pr.params.q()) +
                       " penalty=" + pr.penalty.name());
  }
  m.emplace_back("horizon", std::to_string(sc.sim.horizon));
  m.emplace_back("runs", std::to_string(sc.sim.runs));
  m.emplace_back("seed", std::to_string(sc.sim.seed));
  m.emplace_back("burn_in", std::to_string(sc.sim.burn_in));
  m.emplace_back("epsilon", fmt_num(sc.epsilon));
  m.emplace_back("rvi_epsilon", fmt_num(sc.rvi_epsilon));
  m.emplace_back("generator", kGeneratorName);
  return m;
}

/// Header: scenario,policy,mean,se,regret,regret_kind. regret_kind is
/// "relative", "absolute" (optimal cost not positive) or "none".
inline void write_report_csv(std::ostream& os, const SimReport& rep) {
  os << "scenario,policy,mean,se,regret,regret_kind\n";
  for (const auto& row : rep.rows) {
    os << rep.scenario << ',' << row.result.policy << ',' << fmt_num(row.result.mean) << ','
       << fmt_num(row.result.se) << ',';
    if (row.regret)
      os << fmt_num(*row.regret) << ',' << (row.gap ? "absolute" : "relative");
    else
      os << ",none";
    os << '\n';
  }
}

/// Header: scenario,policy,run,value
inline void write_runs_csv(std::ostream& os, const SimReport& rep) {
  os << "scenario,policy,run,value\n";
  for (const auto& row : rep.rows)
    for (std::size_t k = 0; k < row.result.per_run.size(); ++k)
      os << rep.scenario << ',' << row.result.policy << ',' << k << ','
         << fmt_num(row.result.per_run[k], 12) << '\n';
}

}  // namespace uoi
