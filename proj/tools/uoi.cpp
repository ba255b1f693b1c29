// uoi: Whittle-index scheduling of binary Markov sources.
//
//   uoi index --scenario s.json [--out tables.csv]
//   uoi simulate --scenario s.json [--out report.csv] [--seed N] [--runs N] [--horizon N]
//                [--policies whittle,myopic] [--burn-in N] [--dump-index] [--debug-belief]
//   uoi reproduce I|II|III|IV [--out cells.csv] [--seed N] [--runs N] [--horizon N] [--burn-in N]
//
// Exit codes: 0 ok, 2 invalid input, 3 no convergence, 4 numerical failure, 5 I/O.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace uoi;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<long long> horizon;
  std::optional<long long> burn_in;
  std::vector<std::string> policies;
  bool dump_index = false;
  bool debug_belief = false;
};

void apply(const Overrides& o, cli::ScenarioFile& f) {
  auto& sc = f.scenario;
  if (o.seed) sc.sim.seed = *o.seed;
  if (o.runs) sc.sim.runs = *o.runs;
  if (o.horizon) sc.sim.horizon = *o.horizon;
  if (o.burn_in) sc.sim.burn_in = *o.burn_in;
  if (!o.policies.empty()) {
    sc.policies.clear();
    for (const auto& p : o.policies) sc.policies.push_back(parse_policy(p));
  }
  f.dump_index = f.dump_index || o.dump_index;
  f.debug_belief = f.debug_belief || o.debug_belief;
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  auto os = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*os) fail(ErrorKind::io, "cannot write '" + path + "'");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) fail(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whittle-index scheduling of binary Markov sources under concave belief penalties"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, table_id;
  Overrides ov;

  auto* idx = app.add_subcommand("index", "build Whittle index tables for every process");
  idx->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  idx->add_option("--out", out_path, "output CSV (default: scenario output or stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo evaluation of the requested policies");
  sim->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  sim->add_option("--out", out_path, "report CSV (default: scenario output or stdout)");
  sim->add_option("--seed", ov.seed, "base seed");
  sim->add_option("--runs", ov.runs, "independent runs")->check(CLI::PositiveNumber);
  sim->add_option("--horizon", ov.horizon, "slots per run")->check(CLI::PositiveNumber);
  sim->add_option("--policies", ov.policies, "comma separated: whittle,myopic,optimal,round-robin")
      ->delimiter(',');
  sim->add_option("--burn-in", ov.burn_in, "slots discarded before the horizon")->check(CLI::NonNegativeNumber);
  sim->add_flag("--dump-index", ov.dump_index, "also write the index tables (<out>.index.csv)");
  sim->add_flag("--debug-belief", ov.debug_belief,
                "also write empirical P[S=1] per information state (<out>.belief.csv)");

  auto* rep = app.add_subcommand("reproduce", "rerun one of the built-in experiment tables");
  rep->add_option("table", table_id, "I, II, III or IV")->required()->check(CLI::IsMember({"I", "II", "III", "IV"}));
  rep->add_option("--out", out_path, "per-cell CSV");
  rep->add_option("--seed", ov.seed, "base seed");
  rep->add_option("--runs", ov.runs, "independent runs")->check(CLI::PositiveNumber);
  rep->add_option("--horizon", ov.horizon, "slots per run")->check(CLI::PositiveNumber);
  rep->add_option("--burn-in", ov.burn_in, "slots discarded before the horizon")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[invalid_input]: " << e.what() << "\n";
    return cli::exit_code(ErrorKind::invalid_input);
  }

  try {
    if (*idx || *sim) {
      auto f = cli::load_scenario(scenario_path);
      apply(ov, f);
      if (out_path.empty() && f.output) out_path = *f.output;
      std::unique_ptr<std::ofstream> file;
      if (!out_path.empty()) file = open_out(out_path);
      std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;

      if (*idx) {
        cli::cmd_index(f, out);
      } else {
        std::unique_ptr<std::ofstream> ifile, bfile;
        if (file && f.dump_index) ifile = open_out(out_path + ".index.csv");
        if (file && f.debug_belief) bfile = open_out(out_path + ".belief.csv");
        std::ostream* iout = ifile ? ifile.get() : (f.dump_index ? &std::cout : nullptr);
        std::ostream* bout = bfile ? bfile.get() : (f.debug_belief ? &std::cout : nullptr);
        cli::cmd_simulate(f, out, iout, bout);
        if (ifile) finish(*ifile, out_path + ".index.csv");
        if (bfile) finish(*bfile, out_path + ".belief.csv");
      }
      if (file) finish(*file, out_path);
    } else if (*rep) {
      SimConfig cfg;
      if (ov.seed) cfg.seed = *ov.seed;
      if (ov.runs) cfg.runs = *ov.runs;
      if (ov.horizon) cfg.horizon = *ov.horizon;
      if (ov.burn_in) cfg.burn_in = *ov.burn_in;
      std::unique_ptr<std::ofstream> file;
      if (!out_path.empty()) file = open_out(out_path);
      cli::cmd_reproduce(table_id, cfg, std::cout, file.get());
      if (file) finish(*file, out_path);
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[numerical]: " << e.what() << "\n";
    return cli::exit_code(ErrorKind::numerical);
  }
  return 0;
}
