#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "scenario_file.hpp"
#include "uoi/report.hpp"
#include "uoi/tables.hpp"
#include "uoi/whittle.hpp"

namespace uoi::cli {

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input: return 2;
    case ErrorKind::convergence: return 3;
    case ErrorKind::numerical: return 4;
    case ErrorKind::io: return 5;
  }
  return 1;
}

inline std::vector<IndexTable> build_tables(const Scenario& sc) {
  std::vector<IndexTable> out;
  for (std::size_t j = 0; j < sc.processes.size(); ++j) {
    const auto& pr = sc.processes[j];
    try {
      out.push_back(build_table(pr.params, pr.penalty, sc.epsilon));
    } catch (const Error& e) {
      fail(e.kind(), "process " + std::to_string(j + 1) + ": " + e.what());
    }
  }
  return out;
}

/// Header: process,rank,last,age,belief,index
inline void write_index_csv(std::ostream& os, const std::vector<IndexTable>& tables) {
  os << "process,rank,last,age,belief,index\n";
  for (std::size_t j = 0; j < tables.size(); ++j)
    write_table_csv(os, tables[j], std::to_string(j + 1) + ",");
}

inline void cmd_index(const ScenarioFile& f, std::ostream& out) {
  const auto& sc = f.scenario;
  const auto tables = build_tables(sc);
  Metadata meta{{"scenario", sc.name}, {"epsilon", fmt_num(sc.epsilon)}};
  for (std::size_t j = 0; j < tables.size(); ++j)
    meta.emplace_back("process." + std::to_string(j + 1),
                      "p=" + fmt_num(sc.processes[j].params.p()) + " q=" + fmt_num(sc.processes[j].params.q()) +
                          " penalty=" + sc.processes[j].penalty.name() +
                          " cutoff=" + std::to_string(tables[j].space.cutoff()));
  write_metadata(out, meta);
  write_index_csv(out, tables);
}

/// Header: process,last,age,belief,visits,empirical,se
inline void write_belief_check(std::ostream& os, const BeliefTally& t,
                               const std::vector<TruncatedSpace>& sps) {
  os << "process,last,age,belief,visits,empirical,se\n";
  for (std::size_t j = 0; j < sps.size(); ++j) {
    for (std::size_t i = 0; i < sps[j].size(); ++i) {
      const long long n = t.visits[j][i];
      if (n == 0) continue;
      const double w = sps[j].belief(i);
      const double emp = static_cast<double>(t.ones[j][i]) / static_cast<double>(n);
      os << j + 1 << ',' << sps[j][i].state.last << ',' << sps[j][i].state.age << ',' << fmt_num(w, 12)
         << ',' << n << ',' << fmt_num(emp, 12) << ',' << fmt_num(std::sqrt(w * (1.0 - w) / n), 6) << '\n';
    }
  }
}

/// Runs the scenario. Index tables and the belief check go to their own
/// streams when requested.
inline SimReport cmd_simulate(const ScenarioFile& f, std::ostream& out, std::ostream* index_out = nullptr,
                              std::ostream* belief_out = nullptr) {
  const auto& sc = f.scenario;
  validate(sc);
  const auto rep = run(sc);
  auto meta = scenario_metadata(sc);
  if (rep.g_star) meta.emplace_back("g_star", fmt_num(*rep.g_star));
  write_metadata(out, meta);
  write_report_csv(out, rep);

  if (f.dump_index && index_out) {
    write_metadata(*index_out, {{"scenario", sc.name}, {"epsilon", fmt_num(sc.epsilon)}});
    write_index_csv(*index_out, build_tables(sc));
  }
  if (f.debug_belief && belief_out) {
    const auto pol = Policy::make(sc.policies.front(), sc.processes, sc.epsilon, sc.rvi_epsilon);
    BeliefTally tally;
    simulate(sc.processes, pol, sc.sim, &tally);
    write_metadata(*belief_out, {{"scenario", sc.name}, {"policy", pol.name()}});
    write_belief_check(*belief_out, tally, pol.spaces());
  }
  return rep;
}

/// Runs every row of a built-in table with the optimal, Whittle and myopic
/// policies and prints reference, measured and deviation per cell.
inline void cmd_reproduce(const std::string& table_id, const SimConfig& cfg, std::ostream& text,
                          std::ostream* csv = nullptr) {
  const auto& tab = builtin_table(table_id);
  char line[256];
  text << "Table " << tab.id << ": " << tab.caption << "\n";
  text << "runs=" << cfg.runs << " horizon=" << cfg.horizon << " seed=" << cfg.seed
       << " burn_in=" << cfg.burn_in << "\n";
  if (csv) {
    write_metadata(*csv, {{"table", tab.id},
                          {"runs", std::to_string(cfg.runs)},
                          {"horizon", std::to_string(cfg.horizon)},
                          {"seed", std::to_string(cfg.seed)},
                          {"burn_in", std::to_string(cfg.burn_in)},
                          {"generator", kGeneratorName}});
    *csv << "table,row,policy,reference,measured,se,deviation,regret\n";
  }
  for (const auto& row : tab.rows) {
    Scenario sc;
    sc.name = row.id;
    sc.processes = row.processes();
    sc.policies = {PolicyKind::optimal, PolicyKind::whittle, PolicyKind::myopic};
    sc.sim = cfg;
    const auto rep = run(sc);
    text << "\n" << row.id << " ";
    for (auto [p, q] : row.pq) text << " (" << fmt_num(p) << "," << fmt_num(q) << ")";
    text << "  penalty=" << row.penalty.name() << "  g*=" << fmt_num(*rep.g_star, 6) << "\n";
    std::snprintf(line, sizeof line, "  %-8s %11s %11s %9s %10s %10s\n", "policy", "reference", "measured",
                  "se", "deviation", "regret");
    text << line;
    const double refs[] = {row.optimal, row.whittle, row.myopic};
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
      const auto& r = rep.rows[k];
      const double dev = (r.result.mean - refs[k]) / refs[k];
      const double reg = r.regret.value_or(0.0);
      std::snprintf(line, sizeof line, "  %-8s %11.5f %11.5f %9.5f %9.3f%% %9.3f%%\n", r.result.policy.c_str(),
                    refs[k], r.result.mean, r.result.se, 100.0 * dev, 100.0 * reg);
      text << line;
      if (csv)
        *csv << tab.id << ',' << row.id << ',' << r.result.policy << ',' << fmt_num(refs[k]) << ','
             << fmt_num(r.result.mean) << ',' << fmt_num(r.result.se) << ',' << fmt_num(dev) << ','
             << fmt_num(reg) << '\n';
    }
  }
}

}  // namespace uoi::cli
