// Acceptance run: one PASS/FAIL line per criterion, details indented above it.
//
//   acceptance [path-to-uoi-cli scenario.json workdir]
//
// With the optional arguments, criterion 11 also runs the CLI binary twice.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "uoi.hpp"

using namespace uoi;

namespace {

const Penalty kPenalties[] = {Penalty::entropy(), Penalty::mean_std(), Penalty::quadratic(),
                              Penalty::reciprocal()};

int failures = 0;

void verdict(int id, bool ok, const std::string& what, double seconds) {
  std::printf("[%s] criterion %2d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const std::string& what, F body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    std::printf("    exception: %s\n", e.what());
  }
  verdict(id, ok, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

double rel(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

// Runs a built-in table with the protocol of the published experiments.
bool table_check(const std::string& id, double wi_tol, double my_tol, double opt_tol, double regret_cap) {
  bool ok = true;
  for (const auto& row : builtin_table(id).rows) {
    Scenario sc;
    sc.name = row.id;
    sc.processes = row.processes();
    sc.policies = {PolicyKind::optimal, PolicyKind::whittle, PolicyKind::myopic};
    sc.sim = {10000, 50, 20240601, 0};
    const auto rep = run(sc);
    const auto& opt = rep.rows[0];
    const auto& wi = rep.rows[1];
    const auto& my = rep.rows[2];
    const double g = *rep.g_star;
    bool r = rel(wi.result.mean, row.whittle) <= wi_tol;
    if (my_tol > 0) r = r && rel(my.result.mean, row.myopic) <= my_tol;
    if (opt_tol > 0) r = r && rel(opt.result.mean, row.optimal) <= opt_tol && rel(g, row.optimal) <= opt_tol;
    if (regret_cap > 0) r = r && *wi.regret <= regret_cap;
    std::printf("    %-3s g*=%.5f  opt %.5f (ref %.5f, %+.2f%%)  WI %.5f (ref %.5f, %+.2f%%, regret %.3f%%)"
                "  myopic %.5f (ref %.5f, %+.2f%%)  %s\n",
                row.id.c_str(), g, opt.result.mean, row.optimal, 100 * (opt.result.mean / row.optimal - 1),
                wi.result.mean, row.whittle, 100 * (wi.result.mean / row.whittle - 1), 100 * *wi.regret,
                my.result.mean, row.myopic, 100 * (my.result.mean / row.myopic - 1), r ? "ok" : "OUT");
    ok = ok && r;
  }
  return ok;
}

// Random (p,q) of one class with |1-p-q| in [lo, hi].
BanditParams draw(std::mt19937_64& gen, bool monotonic, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.01, 0.99), m(lo, hi);
  for (;;) {
    const double r = monotonic ? m(gen) : -m(gen);
    const double s = 1.0 - r;  // p + q
    const double p = u(gen) * s;
    const double q = s - p;
    if (p > 0.005 && p < 0.995 && q > 0.005 && q < 0.995) return BanditParams(p, q);
  }
}

bool oracle_agreement() {
  std::mt19937_64 gen(505);
  double worst = 0.0;
  int instances = 0;
  for (bool mono : {true, false}) {
    for (int i = 0; i < 24; ++i) {
      const auto b = draw(gen, mono, 0.02, 0.12);
      const auto sp = build_space(b);
      if (sp.cutoff() > 10) return false;
      for (const auto& H : kPenalties) {
        const auto t = build_table(sp, H);
        for (std::size_t k = 0; k < t.order.size(); ++k) {
          const double o = whittle_bisection_oracle(sp, H, t.order[k], std::max(1.0, 2 * std::abs(t.indices[k])));
          worst = std::max(worst, std::abs(o - t.indices[k]));
        }
        ++instances;
      }
    }
  }
  std::printf("    %d tables (24 per class x 4 penalties, F <= 10), worst |W - oracle| = %.2e\n", instances,
              worst);
  return worst <= 1e-5;
}

bool hitting_exact() {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> u(0.005, 0.995);
  bool ok = true;
  for (bool mono : {true, false}) {
    int n = 0, inconclusive = 0, mismatched = 0;
    while (n < 10000) {
      const double p = u(gen), q = u(gen);
      if ((p + q < 1) != mono || std::abs(p + q - 1) < 1e-3) continue;
      double l = u(gen), h = u(gen);
      if (l > h) std::swap(l, h);
      const BanditParams b(p, q);
      const double w = u(gen);
      const SamplingRegion g{l, h};
      ++n;
      const auto bf = hit_bruteforce(b, w, g, 10000);
      if (!bf) {
        ++inconclusive;
        continue;
      }
      const auto c = mono ? hit_monotonic(b, w, g) : hit_oscillating(b, w, g);
      if (!(c == *bf)) ++mismatched;
    }
    std::printf("    %s: %d instances, %d mismatches, %d inconclusive\n", mono ? "monotonic" : "oscillating", n,
                mismatched, inconclusive);
    ok = ok && mismatched == 0 && inconclusive < n / 100;
  }
  return ok;
}

bool nested_regions() {
  std::mt19937_64 gen(707);
  bool ok = true;
  int solves = 0, mismatched_states = 0;
  for (bool mono : {true, false}) {
    for (int i = 0; i < 10; ++i) {
      const auto b = draw(gen, mono, 0.05, 0.85);
      const auto& H = kPenalties[i % 4];
      const auto sp = build_space(b);
      const auto t = build_table(sp, H);
      const double top = 1.5 * t.indices.back();
      std::vector<bool> prev;
      for (int k = 0; k < 20; ++k) {
        const double lam = top * k / 19.0;
        const auto s = solve_single(sp, H, lam);
        extract_region(s, sp);
        ++solves;
        if (!prev.empty())
          for (std::size_t x = 0; x < sp.size(); ++x)
            if (s.active[x] && !prev[x]) {
              std::printf("    not nested: p=%.4f q=%.4f %s lambda=%.6f state %s\n", b.p(), b.q(),
                          H.name().c_str(), lam, describe(sp[x].state).c_str());
              ok = false;
            }
        for (std::size_t x = 0; x < sp.size(); ++x) {
          const double w = t.at(x);
          if (std::abs(w - lam) < 1e-6 * std::max(1.0, std::abs(w))) continue;
          mismatched_states += (w > lam) != static_cast<bool>(s.active[x]);
        }
        prev = s.active;
      }
    }
  }
  std::printf("    %d solves, table-implied region differs from RVI at %d states\n", solves, mismatched_states);
  return ok && mismatched_states == 0;
}

bool concave_values() {
  std::mt19937_64 gen(808);
  double worst = -1.0;
  for (bool mono : {true, false}) {
    for (int i = 0; i < 10; ++i) {
      const auto b = draw(gen, mono, 0.05, 0.85);
      const auto& H = kPenalties[i % 4];
      const auto sp = build_space(b);
      const auto t = build_table(sp, H);
      for (double f : {0.0, 0.25, 0.5, 0.75, 1.25}) {
        const double lam = t.indices.front() + f * (t.indices.back() - t.indices.front());
        const auto s = solve_single(sp, H, lam);
        for (std::size_t x = 1; x + 1 < sp.size(); ++x) {
          // V minus the chord through its neighbours, in belief coordinates
          const double h1 = sp.belief(x) - sp.belief(x - 1), h2 = sp.belief(x + 1) - sp.belief(x);
          const double chord = (h2 * s.V[x - 1] + h1 * s.V[x + 1]) / (h1 + h2);
          worst = std::max(worst, chord - s.V[x]);
        }
      }
    }
  }
  std::printf("    100 solves, largest chord defect %.2e\n", worst);
  return worst <= 1e-8;
}

bool never_sample() {
  const auto H = Penalty::entropy();
  bool ok = true;
  for (auto [p, q] : {std::pair{0.05, 0.2}, {0.2, 0.4}, {0.7, 0.9}, {0.6, 0.1}}) {
    const BanditParams b(p, q);
    const auto sp = build_space(b);
    const auto s = solve_single(sp, H, 1e3);
    const auto g = extract_region(s, sp);
    const double err = std::abs(s.g - H(b.equilibrium()));
    std::printf("    (%.2f,%.2f) region %s, |g - H(w*)| = %.1e\n", p, q, g.empty() ? "empty" : "NONEMPTY", err);
    ok = ok && g.empty() && err <= 1e-8;
  }
  return ok;
}

bool single_process_closed_form() {
  std::mt19937_64 gen(909);
  std::uniform_real_distribution<double> u(0.03, 0.97);
  const auto H = Penalty::entropy();
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    double p, q;
    do {
      p = u(gen);
      q = u(gen);
    } while (std::abs(p + q - 1) < 0.05);
    const std::vector<ProcessSpec> one{{BanditParams(p, q), H}};
    const auto r = simulate(one, Policy::whittle(one), {100000, 10, 1000 + static_cast<std::uint64_t>(i), 0});
    const double exact = q / (p + q) * H(p) + p / (p + q) * H(1 - q);
    const double z = (r.mean - exact) / r.se;
    std::printf("    (%.4f,%.4f) simulated %.6f exact %.6f se %.1e z %+.2f\n", p, q, r.mean, exact, r.se, z);
    ok = ok && std::abs(z) <= 3.0;
  }
  return ok;
}

bool byte_identical(int argc, char** argv) {
  auto f = cli::parse_scenario(R"({"name": "repro", "processes": [{"p": 0.05, "q": 0.2}, {"p": 0.2, "q": 0.4},
                                   {"p": 0.9, "q": 0.8}], "policies": ["optimal", "whittle", "myopic", "round-robin"],
                                   "horizon": 2000, "runs": 5, "seed": 77})");
  std::ostringstream a, b;
  cli::cmd_simulate(f, a);
  cli::cmd_simulate(f, b);
  bool ok = a.str() == b.str();
  std::printf("    in-process: %zu bytes, %s\n", a.str().size(), ok ? "identical" : "DIFFERENT");
  if (argc >= 4) {
    const std::string cli = argv[1], sc = argv[2], dir = argv[3];
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      const std::string path = dir + "/acceptance_run" + std::to_string(k) + ".csv";
      const std::string cmd = "\"" + cli + "\" simulate --scenario \"" + sc + "\" --runs 5 --horizon 2000 --out \"" +
                              path + "\"";
      if (std::system(cmd.c_str()) != 0) return false;
      std::ifstream in(path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      out[k] = ss.str();
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    std::printf("    CLI binary: %zu bytes, %s\n", out[0].size(), same ? "identical" : "DIFFERENT");
    ok = ok && same;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  criterion(1, "Table I within 2% (WI, optimal) and 3% (myopic)",
            [] { return table_check("I", 0.02, 0.03, 0.02, 0.0); });
  criterion(2, "Table II WI within 2%", [] { return table_check("II", 0.02, 0.0, 0.0, 0.0); });
  criterion(3, "Table III WI within 2%, regret at most 1.5%",
            [] { return table_check("III", 0.02, 0.0, 0.0, 0.015); });
  criterion(4, "Table IV WI within 2%", [] { return table_check("IV", 0.02, 0.0, 0.0, 0.0); });
  criterion(5, "index table matches the bisection oracle within 1e-5", oracle_agreement);
  criterion(6, "hitting-time closed forms equal brute force", hitting_exact);
  criterion(7, "sampling regions nested along the charge grid", nested_regions);
  criterion(8, "relative value function concave within 1e-8", concave_values);
  criterion(9, "charge 1e3 gives the never-sample policy", never_sample);
  criterion(10, "single-process average within 3 SE of the closed form", single_process_closed_form);
  criterion(11, "identical scenario and seed give byte-identical CSV", [&] { return byte_identical(argc, argv); });
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
