#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uoi/belief.hpp"
#include "uoi/penalty.hpp"
#include "uoi/policy.hpp"

namespace uoi {

inline constexpr const char* kGeneratorName = "mt19937_64 seeded by splitmix64(seed ^ splitmix64(run + 1))";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream for one run.
inline std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) {
  return splitmix64(seed ^ splitmix64(run + 1));
}

/// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

struct SimConfig {
  long long horizon = 10000;
  int runs = 50;
  std::uint64_t seed = 1;
  /// Slots simulated before the horizon and left out of the average.
  long long burn_in = 0;
};

/// Counts of S(t+1) = 1 against the belief the monitor held for it.
struct BeliefTally {
  std::vector<std::vector<long long>> visits;  ///< [process][position]
  std::vector<std::vector<long long>> ones;
  std::vector<long long> slots_in_one;         ///< hidden-state marginal per process
  long long slots = 0;

  void reset(const std::vector<TruncatedSpace>& sps) {
    visits.clear();
    ones.clear();
    for (const auto& sp : sps) {
      visits.emplace_back(sp.size(), 0);
      ones.emplace_back(sp.size(), 0);
    }
    slots_in_one.assign(sps.size(), 0);
    slots = 0;
  }
};

/// Time-averaged sum penalty of one run.
///
/// Slot t: the policy picks j from the current positions; j delivers S_j(t)
/// and moves to (S_j(t), 1); every other process ages by one. All hidden
/// states then step to S(t+1) and the slot is charged the penalty of each
/// process's belief about S(t+1).
inline double simulate_run(const std::vector<ProcessSpec>& procs, const Policy& pol,
                           const SimConfig& cfg, int run, BeliefTally* tally = nullptr) {
  const std::size_t M = procs.size();
  if (M == 0) fail(ErrorKind::invalid_input, "no processes to simulate");
  if (pol.processes() != M) fail(ErrorKind::invalid_input, "policy built for a different process count");
  if (cfg.horizon < 1) fail(ErrorKind::invalid_input, "horizon must be at least 1");
  if (cfg.burn_in < 0) fail(ErrorKind::invalid_input, "burn-in must be nonnegative");
  const auto& sps = pol.spaces();

  std::vector<double> cost;
  std::size_t offset = 0;
  std::vector<std::size_t> base(M);
  for (std::size_t j = 0; j < M; ++j) {
    base[j] = offset;
    for (std::size_t i = 0; i < sps[j].size(); ++i) cost.push_back(procs[j].penalty(sps[j].belief(i)));
    offset += sps[j].size();
  }

  std::mt19937_64 gen(run_seed(cfg.seed, static_cast<std::uint64_t>(run)));
  auto step = [&](std::size_t j, int s) {
    const double u = uniform01(gen);
    return s == 0 ? (u < procs[j].params.p() ? 1 : 0) : (u < procs[j].params.q() ? 0 : 1);
  };

  // synthetic observation one slot before t = 0
  std::vector<int> S(M);
  std::vector<std::size_t> pos(M);
  for (std::size_t j = 0; j < M; ++j) {
    const int x = uniform01(gen) < procs[j].params.equilibrium() ? 1 : 0;
    pos[j] = x ? sps[j].q_position() : sps[j].p_position();
    S[j] = step(j, x);
  }

  double total = 0.0;
  const long long slots = cfg.burn_in + cfg.horizon;
  for (long long t = 0; t < slots; ++t) {
    const std::size_t a = pol.decide_positions(pos);
    for (std::size_t j = 0; j < M; ++j) {
      if (j == a)
        pos[j] = S[j] ? sps[j].q_position() : sps[j].p_position();
      else
        pos[j] = sps[j].successor(pos[j]);
    }
    for (std::size_t j = 0; j < M; ++j) S[j] = step(j, S[j]);
    if (t < cfg.burn_in) continue;
    double c = 0.0;
    for (std::size_t j = 0; j < M; ++j) c += cost[base[j] + pos[j]];
    total += c;
    if (tally) {
      ++tally->slots;
      for (std::size_t j = 0; j < M; ++j) {
        ++tally->visits[j][pos[j]];
        tally->ones[j][pos[j]] += S[j];
        tally->slots_in_one[j] += S[j];
      }
    }
  }
  return total / static_cast<double>(cfg.horizon);
}

struct PolicyResult {
  std::string policy;
  std::vector<double> per_run;
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and standard error, summed in run order.
inline void summarize(PolicyResult& r) {
  const double n = static_cast<double>(r.per_run.size());
  double s = 0.0;
  for (double v : r.per_run) s += v;
  r.mean = s / n;
  double ss = 0.0;
  for (double v : r.per_run) ss += (v - r.mean) * (v - r.mean);
  r.se = r.per_run.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

/// All runs of one policy. Every policy sees the same hidden-state paths for a
/// given run because the draws do not depend on the decisions.
inline PolicyResult simulate(const std::vector<ProcessSpec>& procs, const Policy& pol,
                             const SimConfig& cfg, BeliefTally* tally = nullptr) {
  if (cfg.runs < 1) fail(ErrorKind::invalid_input, "runs must be at least 1");
  if (tally) tally->reset(pol.spaces());
  PolicyResult r;
  r.policy = pol.name();
  for (int k = 0; k < cfg.runs; ++k) r.per_run.push_back(simulate_run(procs, pol, cfg, k, tally));
  summarize(r);
  return r;
}

/// Relative regret (g - g*) / g*.
inline double regret(double g, double g_star) {
  if (!(g_star > 0.0)) fail(ErrorKind::invalid_input, "relative regret needs a positive optimal cost");
  return (g - g_star) / g_star;
}

struct Scenario {
  std::string name = "scenario";
  std::vector<ProcessSpec> processes;
  std::vector<PolicyKind> policies{PolicyKind::whittle, PolicyKind::myopic};
  SimConfig sim;
  double epsilon = 1e-9;
  double rvi_epsilon = 1e-9;
};

struct PolicyRow {
  PolicyResult result;
  std::optional<double> regret;  ///< relative, or the absolute gap when `gap` is set
  bool gap = false;
};

struct SimReport {
  std::string scenario;
  std::vector<PolicyRow> rows;
  std::optional<double> g_star;  ///< from the joint solver, when solved
};

inline SimReport run(const Scenario& sc) {
  if (sc.processes.empty()) fail(ErrorKind::invalid_input, "scenario has no processes");
  if (sc.policies.empty()) fail(ErrorKind::invalid_input, "scenario has no policies");
  SimReport rep;
  rep.scenario = sc.name;
  for (auto k : sc.policies) {
    const auto pol = Policy::make(k, sc.processes, sc.epsilon, sc.rvi_epsilon);
    if (k == PolicyKind::optimal) rep.g_star = pol.optimal_gain();
    rep.rows.push_back({simulate(sc.processes, pol, sc.sim), std::nullopt, false});
  }
  if (rep.g_star) {
    for (auto& row : rep.rows) {
      if (*rep.g_star > 0.0) {
        row.regret = regret(row.result.mean, *rep.g_star);
      } else {
        row.regret = row.result.mean - *rep.g_star;
        row.gap = true;
      }
    }
  }
  return rep;
}

}  // namespace uoi
