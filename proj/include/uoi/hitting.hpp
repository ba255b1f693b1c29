#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uoi/belief.hpp"

namespace uoi {

/// Open belief interval (lower, upper) where the single-bandit policy samples.
/// lower == upper encodes the empty region.
struct SamplingRegion {
  double lower = 0.0;
  double upper = 1.0;
  bool empty() const { return !(lower < upper); }
  bool contains(double w) const { return lower < w && w < upper; }
};

/// Nonnegative slot count or infinity.
class HittingTime {
 public:
  static HittingTime infinite() { return HittingTime(-1); }
  static HittingTime finite(long long k) { return HittingTime(k); }
  bool is_infinite() const { return v_ < 0; }
  bool is_finite() const { return v_ >= 0; }
  long long value() const { return v_; }
  std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }
  friend bool operator==(const HittingTime&, const HittingTime&) = default;

 private:
  explicit HittingTime(long long v) : v_(v) {}
  long long v_;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Mirror image: 1 - tau_{p,q}(w) = tau_{q,p}(1 - w).
struct Reflected {
  BanditParams params;
  double w;
  SamplingRegion region;
};

inline Reflected reflect(const BanditParams& b, double w, SamplingRegion g) {
  return {BanditParams(b.q(), b.p()), 1.0 - w, {1.0 - g.upper, 1.0 - g.lower}};
}

inline double floor_or_inf(double x) { return std::isfinite(x) ? std::floor(x) : kInf; }
inline double ceil_or_inf(double x) { return std::isfinite(x) ? std::ceil(x) : kInf; }

// Moves a candidate along its parity class until it is the first k for which
// `ok` holds. Corrects log-floor rounding near boundaries.
template <class Pred>
long long settle(long long k, long long stride, long long first, Pred ok) {
  for (int i = 0; i < 4 && !ok(k); ++i) k += stride;
  while (k - stride >= first && ok(k - stride)) k -= stride;
  return k;
}

inline HittingTime first_entry_monotonic(const BanditParams& b, double w, SamplingRegion g) {
  const double ws = b.equilibrium();
  const double lr = std::log(b.r());
  const double l = g.lower, u = g.upper;
  if (w <= l && l < ws) {
    double x = floor_or_inf(std::log((l - ws) / (w - ws)) / lr) + 1.0;
    long long k = static_cast<long long>(x);
    k = settle(k, 1, 1, [&](long long j) { return tau_k(b, w, j) > l; });
    return HittingTime::finite(k);
  }
  if (w >= u && u > ws) {
    double x = floor_or_inf(std::log((u - ws) / (w - ws)) / lr) + 1.0;
    long long k0 = static_cast<long long>(x);
    k0 = settle(k0, 1, 1, [&](long long j) { return tau_k(b, w, j) < u; });
    if (tau_k(b, w, k0) > l) return HittingTime::finite(k0);
    return HittingTime::infinite();
  }
  return HittingTime::infinite();
}

inline HittingTime first_entry_oscillating(const BanditParams& b, double w, SamplingRegion g) {
  const double ws = b.equilibrium();
  const double lr = std::log(b.p() + b.q() - 1.0);
  const double l = g.lower, u = g.upper;
  auto varphi = [&](double x, double y) { return 0.5 * std::log((x - ws) / (y - ws)) / lr; };
  auto phi = [&](double x, double y) {
    return 0.5 * std::log((x - ws) / (ws - y)) / lr - 0.5;
  };
  auto in = [&](long long j) { return g.contains(tau_k(b, w, j)); };

  if (l <= ws && ws <= u) {
    // even iterates stay on w's side, odd ones on the far side
    double odd, even;
    if (w <= l) {
      odd = 2.0 * floor_or_inf(phi(u, w)) + 3.0;
      even = 2.0 * floor_or_inf(varphi(l, w)) + 2.0;
    } else {
      odd = 2.0 * floor_or_inf(phi(l, w)) + 3.0;
      even = 2.0 * floor_or_inf(varphi(u, w)) + 2.0;
    }
    long long best = -1;
    if (std::isfinite(odd)) {
      auto k = settle(std::max<long long>(1, static_cast<long long>(odd)), 2, 1, in);
      if (in(k)) best = k;
    }
    if (std::isfinite(even)) {
      auto k = settle(std::max<long long>(2, static_cast<long long>(even)), 2, 2, in);
      if (in(k) && (best < 0 || k < best)) best = k;
    }
    return best < 0 ? HittingTime::infinite() : HittingTime::finite(best);
  }

  // here the region lies strictly above the equilibrium
  if (w >= u) {
    const double k1x = 2.0 * floor_or_inf(varphi(u, w)) + 2.0;
    if (!std::isfinite(k1x)) return HittingTime::infinite();
    long long k1 = settle(static_cast<long long>(k1x), 2, 2,
                          [&](long long j) { return tau_k(b, w, j) < u; });
    const double bound = 2.0 * ceil_or_inf(varphi(l, w)) - 2.0;
    if (static_cast<double>(k1) <= bound && in(k1)) return HittingTime::finite(k1);
    return HittingTime::infinite();
  }
  if (w <= l && tau(b, w) > l) {
    const double k2x = 2.0 * floor_or_inf(phi(u, w)) + 3.0;
    if (!std::isfinite(k2x)) return HittingTime::infinite();
    long long k2 = settle(std::max<long long>(1, static_cast<long long>(k2x)), 2, 1,
                          [&](long long j) { return tau_k(b, w, j) < u; });
    const double bound = 2.0 * ceil_or_inf(phi(l, w)) - 1.0;
    if (static_cast<double>(k2) <= bound && in(k2)) return HittingTime::finite(k2);
    return HittingTime::infinite();
  }
  return HittingTime::infinite();
}

}  // namespace detail

/// Passive slots needed for a monotonic bandit (p+q<1) to enter the region.
inline HittingTime hit_monotonic(const BanditParams& b, double w, SamplingRegion g) {
  if (!b.monotonic()) fail(ErrorKind::invalid_input, "hit_monotonic needs p+q<1");
  if (g.empty()) return HittingTime::infinite();
  if (g.contains(w)) return HittingTime::finite(0);
  if (w == b.equilibrium()) return HittingTime::infinite();
  if (g.upper < b.equilibrium()) {
    auto m = detail::reflect(b, w, g);
    return detail::first_entry_monotonic(m.params, m.w, m.region);
  }
  return detail::first_entry_monotonic(b, w, g);
}

/// Passive slots needed for an oscillating bandit (p+q>1) to enter the region.
inline HittingTime hit_oscillating(const BanditParams& b, double w, SamplingRegion g) {
  if (b.monotonic()) fail(ErrorKind::invalid_input, "hit_oscillating needs p+q>1");
  if (g.empty()) return HittingTime::infinite();
  if (g.contains(w)) return HittingTime::finite(0);
  if (w == b.equilibrium()) return HittingTime::infinite();
  if (g.upper < b.equilibrium()) {
    auto m = detail::reflect(b, w, g);
    return detail::first_entry_oscillating(m.params, m.w, m.region);
  }
  return detail::first_entry_oscillating(b, w, g);
}

inline HittingTime hit(const BanditParams& b, double w, SamplingRegion g) {
  return b.monotonic() ? hit_monotonic(b, w, g) : hit_oscillating(b, w, g);
}

/// Iterates tau up to `cap` times. Returns nullopt when the trajectory has
/// neither entered the region nor provably stopped being able to.
inline std::optional<HittingTime> hit_bruteforce(const BanditParams& b, double w,
                                                 SamplingRegion g, long long cap) {
  const double ws = b.equilibrium();
  // can the open segment from ws to x (x included) meet the region?
  auto reachable = [&](double x) {
    if (x > ws) return g.lower < x && g.upper > ws;
    if (x < ws) return g.upper > x && g.lower < ws;
    return false;
  };
  double x = w;
  for (long long k = 0; k <= cap; ++k) {
    if (g.contains(x)) return HittingTime::finite(k);
    const double nx = tau(b, x);
    if (g.empty() || (!reachable(x) && !reachable(nx))) return HittingTime::infinite();
    x = nx;
  }
  return std::nullopt;
}

/// Passive steps from `start` until a state in `active` is reached,
/// walking the truncated space (ages saturate at F+1).
inline HittingTime discrete_hit(const TruncatedSpace& sp, std::size_t start,
                                const std::vector<bool>& active) {
  std::size_t cur = start;
  for (long long k = 0;; ++k) {
    if (active[cur]) return HittingTime::finite(k);
    if (cur == sp.equilibrium_position()) return HittingTime::infinite();
    cur = sp.successor(cur);
  }
}

inline HittingTime discrete_hit(const TruncatedSpace& sp, InfoState start,
                                const std::vector<bool>& active) {
  return discrete_hit(sp, sp.position(start), active);
}

}  // namespace uoi
