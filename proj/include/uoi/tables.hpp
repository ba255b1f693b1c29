#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uoi/penalty.hpp"
#include "uoi/policy.hpp"

namespace uoi {

/// One row of the built-in experiment tables with its published averages.
struct TableRow {
  std::string id;
  std::vector<std::pair<double, double>> pq;
  Penalty penalty;
  double optimal;
  double whittle;
  double myopic;
  double whittle_regret;  ///< fraction, e.g. 0.0001 for 0.01%
  double myopic_regret;

  std::vector<ProcessSpec> processes() const {
    std::vector<ProcessSpec> out;
    for (auto [p, q] : pq) out.push_back({BanditParams(p, q), penalty});
    return out;
  }
};

struct TableSpec {
  std::string id;  ///< "I" .. "IV"
  std::string caption;
  std::vector<TableRow> rows;
};

inline const std::vector<TableSpec>& builtin_tables() {
  static const std::vector<TableSpec> t = [] {
    const auto E = Penalty::entropy();
    const auto H1 = Penalty::mean_std(-1.0, 2.0, 0.5);
    const auto H2 = Penalty::quadratic();
    const auto H3 = Penalty::reciprocal(20.0);
    std::vector<TableSpec> v;
    v.push_back({"I", "entropy penalty, 2 processes",
                 {{"A1", {{0.05, 0.2}, {0.2, 0.4}}, E, 1.2866, 1.2867, 1.527, 0.0001, 0.187},
                  {"A2", {{0.2, 0.2}, {0.4, 0.4}}, E, 1.7219, 1.7219, 1.873, 0.0, 0.088},
                  {"A3", {{0.95, 0.95}, {0.7, 0.7}}, E, 1.2864, 1.2864, 1.5668, 0.0, 0.218},
                  {"A4", {{0.05, 0.1}, {0.2, 0.9}}, E, 1.0309, 1.0318, 1.2424, 0.0009, 0.205}}});
    v.push_back({"II", "entropy penalty, 3 processes",
                 {{"B1", {{0.1, 0.1}, {0.6, 0.6}, {0.3, 0.3}}, E, 2.469, 2.469, 2.792, 0.0, 0.138},
                  {"B2", {{0.1, 0.3}, {0.6, 0.6}, {0.1, 0.2}}, E, 2.2963, 2.2968, 2.7005, 0.0002, 0.176},
                  {"B3", {{0.1, 0.3}, {0.5, 0.6}, {0.9, 0.9}}, E, 2.2158, 2.2179, 2.6506, 0.001, 0.196}}});
    v.push_back({"III", "mean-std penalty (alpha0=-1, alpha1=2, beta=0.5)",
                 {{"C1", {{0.05, 0.2}, {0.4, 0.5}}, H1, 1.057, 1.064, 1.275, 0.007, 0.206},
                  {"C2", {{0.05, 0.1}, {0.5, 0.6}}, H1, 1.480, 1.482, 1.814, 0.001, 0.226},
                  {"D1", {{0.05, 0.2}, {0.1, 0.3}, {0.4, 0.7}}, H1, 1.1467, 1.1485, 1.4079, 0.002, 0.228},
                  {"D2", {{0.1, 0.2}, {0.1, 0.8}, {0.4, 0.5}}, H1, 1.3843, 1.3845, 1.587, 0.0001, 0.146}}});
    v.push_back({"IV", "quadratic (E) and reciprocal (F) penalties",
                 {{"E1", {{0.05, 0.2}, {0.4, 0.5}}, H2, 1.2677, 1.268, 1.618, 0.0002, 0.276},
                  {"E2", {{0.05, 0.2}, {0.4, 0.5}, {0.1, 0.2}}, H2, 1.904, 1.906, 2.507, 0.001, 0.317},
                  {"F1", {{0.05, 0.2}, {0.4, 0.5}}, H3, 21.466, 21.622, 32.722, 0.007, 0.524},
                  {"F2", {{0.05, 0.2}, {0.4, 0.5}, {0.1, 0.2}}, H3, 37.875, 38.225, 49.722, 0.009, 0.323}}});
    return v;
  }();
  return t;
}

inline const TableSpec& builtin_table(const std::string& id) {
  for (const auto& t : builtin_tables())
    if (t.id == id) return t;
  fail(ErrorKind::invalid_input, "unknown table '" + id + "' (expected I, II, III or IV)");
}

inline std::optional<TableRow> find_row(const std::string& id) {
  for (const auto& t : builtin_tables())
    for (const auto& r : t.rows)
      if (r.id == id) return r;
  return std::nullopt;
}

}  // namespace uoi
