#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "uoi/error.hpp"

namespace uoi {

enum class BanditClass { monotonic, oscillating };

/// Transition probabilities of one binary Markov source.
/// p is P(0 -> 1), q is P(1 -> 0).
class BanditParams {
 public:
  BanditParams(double p, double q) : p_(p), q_(q) {
    if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0))
      fail(ErrorKind::invalid_input, "p and q must lie in (0,1)");
    if (std::abs(p + q - 1.0) < 1e-12)
      fail(ErrorKind::invalid_input, "p + q = 1 gives a constant belief; rejected");
  }

  double p() const { return p_; }
  double q() const { return q_; }
  /// 1 - p - q, the contraction ratio of the passive belief map.
  double r() const { return 1.0 - p_ - q_; }
  double equilibrium() const { return p_ / (p_ + q_); }
  BanditClass cls() const {
    return p_ + q_ < 1.0 ? BanditClass::monotonic : BanditClass::oscillating;
  }
  bool monotonic() const { return cls() == BanditClass::monotonic; }

 private:
  double p_;
  double q_;
};

inline double equilibrium(const BanditParams& b) { return b.equilibrium(); }

/// Belief value checked to lie strictly inside (0,1).
inline double make_belief(double w) {
  if (!(w > 0.0 && w < 1.0)) fail(ErrorKind::invalid_input, "belief must lie in (0,1)");
  return w;
}

/// n-step transition probabilities (P^n(0->1), P^n(1->0)).
inline std::pair<double, double> n_step(const BanditParams& b, int n) {
  if (n < 1) fail(ErrorKind::invalid_input, "n_step needs n >= 1");
  const double s = b.p() + b.q();
  const double rn = std::pow(b.r(), n);
  return {(b.p() - b.p() * rn) / s, (b.q() - b.q() * rn) / s};
}

/// One passive step of the belief.
inline double tau(const BanditParams& b, double w) { return b.p() + w * b.r(); }

/// k passive steps, closed form.
inline double tau_k(const BanditParams& b, double w, long long k) {
  if (k == 0) return w;
  const double ws = b.equilibrium();
  return ws + (w - ws) * std::pow(b.r(), static_cast<double>(k));
}

/// Last observation and slots elapsed since it. Age F+1 is the saturated
/// state whose belief is taken to be the equilibrium.
struct InfoState {
  int last = 0;
  int age = 1;
  friend bool operator==(const InfoState&, const InfoState&) = default;
};

/// Untruncated belief of an InfoState: p^(age) or 1 - q^(age).
inline double belief_of(const BanditParams& b, InfoState s) {
  const double ws = b.equilibrium();
  const double ra = std::pow(b.r(), s.age);
  return s.last == 0 ? ws * (1.0 - ra) : ws + (1.0 - ws) * ra;
}

/// The 2F+1 reachable beliefs after truncation at cutoff F, sorted by value.
class TruncatedSpace {
 public:
  struct Entry {
    InfoState state;
    double belief;
  };

  TruncatedSpace(const BanditParams& b, int F) : params_(b), F_(F) {
    if (F < 1) fail(ErrorKind::invalid_input, "cutoff F must be at least 1");
    states_.reserve(2 * static_cast<std::size_t>(F) + 1);
    for (int a = 1; a <= F; ++a) {
      states_.push_back({{0, a}, belief_of(b, {0, a})});
      states_.push_back({{1, a}, belief_of(b, {1, a})});
    }
    states_.push_back({{0, F + 1}, b.equilibrium()});
    std::sort(states_.begin(), states_.end(),
              [](const Entry& x, const Entry& y) { return x.belief < y.belief; });
    for (std::size_t i = 1; i < states_.size(); ++i) {
      if (states_[i].belief - states_[i - 1].belief <= 1e-13)
        fail(ErrorKind::numerical,
             "belief collision in truncated space at F=" + std::to_string(F));
    }
    pos0_.assign(F + 2, 0);
    pos1_.assign(F + 2, 0);
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const auto& s = states_[i].state;
      if (s.age == F + 1) {
        star_ = i;
      } else if (s.last == 0) {
        pos0_[s.age] = i;
      } else {
        pos1_[s.age] = i;
      }
    }
    pos0_[F + 1] = pos1_[F + 1] = star_;
    succ_.resize(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const auto& s = states_[i].state;
      succ_[i] = s.age > F ? star_ : position({s.last, s.age + 1});
    }
  }

  const BanditParams& params() const { return params_; }
  int cutoff() const { return F_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Entry>& states() const { return states_; }
  const Entry& operator[](std::size_t i) const { return states_[i]; }
  double belief(std::size_t i) const { return states_[i].belief; }

  /// Position of an InfoState; ages beyond F map to the equilibrium entry.
  std::size_t position(InfoState s) const {
    if (s.age < 1) fail(ErrorKind::invalid_input, "InfoState age must be >= 1");
    if (s.age > F_) return star_;
    return s.last == 0 ? pos0_[s.age] : pos1_[s.age];
  }
  double belief(InfoState s) const { return states_[position(s)].belief; }

  std::size_t successor(std::size_t i) const { return succ_[i]; }
  std::size_t equilibrium_position() const { return star_; }
  /// Position of (last=0, age=1), belief p.
  std::size_t p_position() const { return pos0_[1]; }
  /// Position of (last=1, age=1), belief 1-q.
  std::size_t q_position() const { return pos1_[1]; }

 private:
  BanditParams params_;
  int F_;
  std::vector<Entry> states_;
  std::vector<std::size_t> pos0_, pos1_, succ_;
  std::size_t star_ = 0;
};

/// Smallest cutoff with both tails within epsilon of the equilibrium.
inline int cutoff_for(const BanditParams& b, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::invalid_input, "epsilon must be positive");
  const double ws = b.equilibrium();
  const double scale = std::max(ws, 1.0 - ws);
  if (scale < epsilon)
    fail(ErrorKind::invalid_input, "epsilon too large: cutoff would be 0");
  const double ar = std::abs(b.r());
  double dev = scale;
  for (int F = 1; F <= 100000; ++F) {
    dev *= ar;
    if (dev < epsilon) return F;
  }
  fail(ErrorKind::numerical, "epsilon too small for this bandit");
}

inline TruncatedSpace build_space(const BanditParams& b, double epsilon = 1e-9) {
  return TruncatedSpace(b, cutoff_for(b, epsilon));
}

inline std::string describe(InfoState s) {
  return "(" + std::to_string(s.last) + "," + std::to_string(s.age) + ")";
}

}  // namespace uoi
