#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "uoi/belief.hpp"
#include "uoi/hitting.hpp"

namespace uoi {

/// Whittle indices over a truncated space, in placement order.
struct IndexTable {
  TruncatedSpace space;
  std::vector<std::size_t> order;    ///< positions, in placement order
  std::vector<double> indices;       ///< W(order[i])
  std::vector<double> by_position;   ///< W indexed by position in `space`
  std::size_t equilibrium_rank = 0;  ///< i with order[i] == equilibrium position

  double at(std::size_t position) const { return by_position[position]; }
  double lookup(InfoState s) const { return by_position[space.position(s)]; }
};

inline double lookup(const IndexTable& t, InfoState s) { return t.lookup(s); }

/// End of the active belt a candidate sits on, in belief order.
enum class Side { lower, upper };

/// Lowest and highest still-active positions.
inline std::pair<std::size_t, std::size_t> candidate_pair(const std::vector<bool>& active) {
  std::size_t lo = 0, hi = active.size();
  while (lo < active.size() && !active[lo]) ++lo;
  while (hi > 0 && !active[hi - 1]) --hi;
  if (lo == active.size()) fail(ErrorKind::invalid_input, "candidate_pair: nothing left to place");
  return {lo, hi - 1};
}

namespace detail {

inline void check_den(double den, const char* where) {
  if (!(std::abs(den) >= 1e-14)) fail(ErrorKind::numerical, std::string("degenerate denominator in ") + where);
}

struct PathLK {
  long long L;
  long long K;
};

inline PathLK path_lk(const TruncatedSpace& sp, const std::vector<bool>& active) {
  auto l = discrete_hit(sp, sp.p_position(), active);
  auto k = discrete_hit(sp, sp.q_position(), active);
  return {l.is_finite() ? l.value() + 1 : -1, k.is_finite() ? k.value() + 1 : -1};
}

inline int age_of(long long k) { return static_cast<int>(k); }

// Shared pieces of the interior formulas.
template <class Pen>
struct Interior {
  double L, K, pL, qK, B, C, G;

  Interior(const TruncatedSpace& sp, const Pen& H, const std::vector<bool>& active) {
    auto lk = path_lk(sp, active);
    if (lk.L < 0 || lk.K < 0)
      fail(ErrorKind::numerical, "interior index needs the equilibrium in the sampling region");
    double sq = 0.0, spp = 0.0;
    for (long long k = 1; k <= lk.K; ++k) sq += H(sp.belief(InfoState{1, age_of(k)}));
    for (long long k = 1; k <= lk.L; ++k) spp += H(sp.belief(InfoState{0, age_of(k)}));
    L = static_cast<double>(lk.L);
    K = static_cast<double>(lk.K);
    pL = sp.belief(InfoState{0, age_of(lk.L)});
    qK = 1.0 - sp.belief(InfoState{1, age_of(lk.K)});
    B = K * pL + L * qK;
    C = L * sq - K * spp;
    G = pL * sq + qK * spp;
  }
};

// Sum over k=1..F of H(tau^k x) - H(p^(k)), on truncated beliefs.
template <class Pen>
double drift_sum(const TruncatedSpace& sp, const Pen& H, std::size_t x, int prole) {
  double s = 0.0;
  std::size_t cur = x;
  for (int k = 1; k <= sp.cutoff(); ++k) {
    cur = sp.successor(cur);
    s += H(sp.belief(cur)) - H(sp.belief(InfoState{prole, k}));
  }
  return s;
}

}  // namespace detail

/// Index of x while the equilibrium is still sampled; one-step form.
template <class Pen>
double index_monotonic_interior(const TruncatedSpace& sp, const Pen& H,
                                const std::vector<bool>& active, std::size_t x) {
  detail::Interior<Pen> in(sp, H, active);
  const std::size_t t = sp.successor(x);
  const double d = sp.belief(x) - sp.belief(t);
  const double den = d * (in.L - in.K) + in.qK + in.pL;
  detail::check_den(den, "interior index");
  return (in.B * H(sp.belief(t)) - in.G - d * in.C) / den;
}

/// Oscillating analogue: two-step form when tau(x) has already been placed.
template <class Pen>
double index_oscillating(const TruncatedSpace& sp, const Pen& H,
                         const std::vector<bool>& active, std::size_t x) {
  const std::size_t t1 = sp.successor(x);
  if (t1 == x || active[t1]) return index_monotonic_interior(sp, H, active, x);
  detail::Interior<Pen> in(sp, H, active);
  const std::size_t t2 = sp.successor(t1);
  const double d = sp.belief(x) - sp.belief(t2);
  const double den = d * (in.L - in.K) + 2.0 * (in.qK + in.pL);
  detail::check_den(den, "two-step index");
  return (in.B * (H(sp.belief(t1)) + H(sp.belief(t2))) - 2.0 * in.G - d * in.C) / den;
}

/// Index of x when it is the only sampled state and the equilibrium is passive.
template <class Pen>
double index_last(const TruncatedSpace& sp, const Pen& H, std::size_t x) {
  const double hs = H(sp.params().equilibrium());
  double sq = 0.0, spp = 0.0;
  for (int k = 1; k <= sp.cutoff(); ++k) {
    sq += H(sp.belief(InfoState{1, k})) - hs;
    spp += H(sp.belief(InfoState{0, k})) - hs;
  }
  return detail::drift_sum(sp, H, x, 0) - sp.belief(x) * (sq - spp);
}

/// Index of a belt end once the equilibrium is passive.
///
/// The closed forms are written for a belt above the equilibrium. A belt
/// below it is handled in mirror coordinates (w -> 1-w, p <-> q), where the
/// inner end plays the lower-boundary role.
template <class Pen>
double index_monotonic_boundary(const TruncatedSpace& sp, const Pen& H,
                                const std::vector<bool>& active, std::size_t x, Side side) {
  const double ws = sp.params().equilibrium();
  const bool mirrored = sp.belief(x) < ws;
  const int prole = mirrored ? 1 : 0;
  const int qrole = 1 - prole;
  auto cb = [&](std::size_t i) { return mirrored ? 1.0 - sp.belief(i) : sp.belief(i); };
  const bool lower_formula = (side == Side::lower) != mirrored;

  const auto kh = discrete_hit(sp, InfoState{qrole, 1}, active);
  if (kh.is_infinite()) {
    if (!lower_formula) fail(ErrorKind::numerical, "upper boundary index without a return path");
    return index_last(sp, H, x);
  }
  const long long K = kh.value() + 1;
  const double hs = H(ws);
  const double qK = 1.0 - cb(sp.position(InfoState{qrole, static_cast<int>(K)}));
  double s2 = 0.0;
  for (long long k = 1; k <= K; ++k) s2 += H(sp.belief(InfoState{qrole, static_cast<int>(k)})) - hs;
  const double xb = cb(x);

  if (lower_formula) {
    const double s1 = detail::drift_sum(sp, H, x, prole);
    detail::check_den(qK + xb, "lower boundary index");
    return (qK * s1 - xb * s2) / (qK + xb);
  }
  const std::size_t t = sp.successor(x);
  const double d = xb - cb(t);
  detail::check_den(d, "upper boundary index");
  return (qK * (H(sp.belief(t)) - hs) - d * s2) / d;
}

/// Builds the full index table by repeatedly retiring the cheaper end of the
/// active belt.
template <class Pen>
IndexTable build_table(const TruncatedSpace& sp, const Pen& H) {
  const std::size_t n = sp.size();
  const std::size_t star = sp.equilibrium_position();
  const bool osc = !sp.params().monotonic();
  std::vector<bool> active(n, true);
  IndexTable t{sp, {}, {}, std::vector<double>(n, 0.0), 0};
  auto place = [&](std::size_t c, double w) {
    if (!std::isfinite(w))
      fail(ErrorKind::numerical, "non-finite index at step " + std::to_string(t.order.size()));
    t.order.push_back(c);
    t.indices.push_back(w);
    t.by_position[c] = w;
    active[c] = false;
  };
  auto interior = [&](std::size_t c) {
    return osc ? index_oscillating(sp, H, active, c) : index_monotonic_interior(sp, H, active, c);
  };

  while (active[star]) {
    auto [lo, hi] = candidate_pair(active);
    if (lo == hi) {
      place(lo, interior(lo));
      continue;
    }
    const double wl = interior(lo), wu = interior(hi);
    if (wl <= wu + 1e-12)
      place(lo, wl);
    else
      place(hi, wu);
  }
  t.equilibrium_rank = t.order.size() - 1;

  if (t.order.size() < n && osc) {
    // plateau: every remaining state shares the equilibrium's index except the
    // one that stays sampled longest
    const double ws_index = t.indices.back();
    std::size_t last = n;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const double v = index_last(sp, H, i);
      if (last == n || v > best) {
        last = i;
        best = v;
      }
    }
    while (t.order.size() + 1 < n) {
      auto [lo, hi] = candidate_pair(active);
      place(lo != last ? lo : hi, ws_index);
    }
    place(last, best);
  }
  while (t.order.size() < n) {
    auto [lo, hi] = candidate_pair(active);
    if (lo == hi) {
      place(lo, index_last(sp, H, lo));
      continue;
    }
    const double wl = index_monotonic_boundary(sp, H, active, lo, Side::lower);
    const double wu = index_monotonic_boundary(sp, H, active, hi, Side::upper);
    if (wl <= wu + 1e-12)
      place(lo, wl);
    else
      place(hi, wu);
  }

  // ordering holds up to the truncation error of the cutoff
  for (std::size_t i = 1; i < n; ++i) {
    const double a = t.indices[i - 1], b = t.indices[i];
    if (b < a - 1e-5 * std::max(1.0, std::abs(a)))
      fail(ErrorKind::numerical, "index ordering violated at step " + std::to_string(i));
  }
  return t;
}

template <class Pen>
IndexTable build_table(const BanditParams& b, const Pen& H, double epsilon = 1e-9) {
  return build_table(build_space(b, epsilon), H);
}

/// CSV dump: rank,last,age,belief,index
inline void write_table_csv(std::ostream& os, const IndexTable& t, const std::string& prefix = "") {
  os << std::setprecision(17);
  for (std::size_t i = 0; i < t.order.size(); ++i) {
    const auto& e = t.space[t.order[i]];
    os << prefix << i + 1 << ',' << e.state.last << ',' << e.state.age << ',' << e.belief << ','
       << t.indices[i] << '\n';
  }
}

}  // namespace uoi
