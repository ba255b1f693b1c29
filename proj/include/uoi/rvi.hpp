#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "uoi/belief.hpp"
#include "uoi/hitting.hpp"

namespace uoi {

/// Single bandit with service charge lambda on the active action.
struct SingleBanditMDP {
  TruncatedSpace space;
  std::vector<double> cost;  ///< penalty at each position
  double lambda = 0.0;

  template <class Pen>
  SingleBanditMDP(TruncatedSpace sp, const Pen& H, double lam)
      : space(std::move(sp)), lambda(lam) {
    cost.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) cost.push_back(H(space.belief(i)));
  }
};

struct RviSolution {
  double g = 0.0;
  std::vector<double> V;       ///< relative values, V at belief p pinned to 0
  std::vector<bool> active;    ///< greedy action per position
  long long iterations = 0;
  double span = 0.0;
  bool converged = false;
};

struct RviOptions {
  double eps = 1e-9;
  long long max_iter = 1000000;
  double tie_tol = 1e-10;
  /// Return the last iterate instead of throwing when max_iter is hit.
  bool allow_stall = false;
};

namespace detail {

inline void single_q(const SingleBanditMDP& m, const std::vector<double>& V, std::size_t i,
                     double& act, double& pas) {
  const auto& sp = m.space;
  const double b = sp.belief(i);
  act = m.lambda + b * V[sp.q_position()] + (1.0 - b) * V[sp.p_position()];
  pas = V[sp.successor(i)];
}

}  // namespace detail

/// Relative value iteration with a 1/2 self-loop added for aperiodicity.
/// The self-loop halves the per-step gain, so g is reported as twice it.
inline RviSolution solve_single(const SingleBanditMDP& m, const RviOptions& opt = {},
                                const std::vector<double>* warm = nullptr) {
  const std::size_t n = m.space.size();
  const std::size_t ref = m.space.p_position();
  RviSolution s;
  s.V = warm && warm->size() == n ? *warm : std::vector<double>(n, 0.0);
  std::vector<double> Z(n);
  double gh = 0.0, span = std::numeric_limits<double>::infinity();
  long long it = 0;
  while (it < opt.max_iter) {
    ++it;
    double dmax = -std::numeric_limits<double>::infinity();
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double act, pas;
      detail::single_q(m, s.V, i, act, pas);
      Z[i] = 0.5 * s.V[i] + 0.5 * (m.cost[i] + std::min(act, pas));
      const double d = Z[i] - s.V[i];
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    gh = dmax;
    span = dmax - dmin;
    const double shift = Z[ref];
    for (std::size_t i = 0; i < n; ++i) s.V[i] = Z[i] - shift;
    if (span <= opt.eps) break;
  }
  s.converged = span <= opt.eps;
  if (!s.converged && !opt.allow_stall)
    fail(ErrorKind::convergence,
         "single-bandit RVI did not converge; last span " + std::to_string(span) + " after " + std::to_string(it) + " iterations");
  s.g = 2.0 * gh;
  s.iterations = it;
  s.span = span;
  s.active.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double act, pas;
    detail::single_q(m, s.V, i, act, pas);
    s.active[i] = act < pas - opt.tie_tol;
  }
  return s;
}

template <class Pen>
RviSolution solve_single(const TruncatedSpace& sp, const Pen& H, double lambda,
                         const RviOptions& opt = {}) {
  return solve_single(SingleBanditMDP(sp, H, lambda), opt);
}

/// Largest Bellman residual over all positions.
inline double bellman_residual(const SingleBanditMDP& m, const RviSolution& s) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.space.size(); ++i) {
    double act, pas;
    detail::single_q(m, s.V, i, act, pas);
    r = std::max(r, std::abs(s.V[i] + s.g - m.cost[i] - std::min(act, pas)));
  }
  return r;
}

/// Region whose open interior holds exactly the active positions. Its bounds
/// are the nearest passive beliefs (or 0 and 1).
inline SamplingRegion extract_region(const RviSolution& s, const TruncatedSpace& sp) {
  const std::size_t n = sp.size();
  std::size_t lo = n, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.active[i]) continue;
    lo = std::min(lo, i);
    hi = i;
  }
  if (lo == n) {
    const double ws = sp.params().equilibrium();
    return {ws, ws};
  }
  for (std::size_t i = lo; i <= hi; ++i)
    if (!s.active[i])
      fail(ErrorKind::numerical, "active set is not a contiguous belief interval");
  return {lo == 0 ? 0.0 : sp.belief(lo - 1), hi + 1 == n ? 1.0 : sp.belief(hi + 1)};
}

/// Smallest service charge at which position `s` turns passive, found by
/// bisection on RVI solutions.
///
/// Close to a charge where two policies with different recurrent classes
/// tie, value iteration needs on the order of 1/(gain gap) sweeps to pick the
/// better one. Those solves are cut at opt.max_iter and their last greedy
/// policy is used; the resulting error stays inside the stalled band.
template <class Pen>
double whittle_bisection_oracle(const TruncatedSpace& sp, const Pen& H, std::size_t s,
                                double lambda_hi = 1.0, double tol = 1e-7,
                                RviOptions opt = {1e-9, 200000, 1e-10, true}) {
  opt.allow_stall = true;
  SingleBanditMDP m(sp, H, lambda_hi);
  std::vector<double> warm;
  auto passive_at = [&](double lam) {
    m.lambda = lam;
    auto sol = solve_single(m, opt, warm.empty() ? nullptr : &warm);
    warm = sol.V;
    return !sol.active[s];
  };
  double hi = std::max(lambda_hi, 1e-3);
  for (int i = 0; !passive_at(hi); ++i) {
    if (i > 80) fail(ErrorKind::convergence, "oracle: no passive service charge found");
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int i = 0; passive_at(lo); ++i) {
    if (i > 80) fail(ErrorKind::convergence, "oracle: no active service charge found");
    lo = lo == 0.0 ? -1.0 : lo * 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (passive_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exact scheduling MDP for a few processes: one activation per slot.
struct JointMDP {
  std::vector<TruncatedSpace> spaces;
  std::vector<std::vector<double>> cost;  ///< per process, per position
  std::vector<std::size_t> stride;
  std::size_t states = 1;

  template <class PenList>
  JointMDP(std::vector<TruncatedSpace> sps, const PenList& pens) : spaces(std::move(sps)) {
    if (spaces.empty() || spaces.size() > 3)
      fail(ErrorKind::invalid_input, "joint solver supports 1 to 3 processes");
    if (pens.size() != spaces.size())
      fail(ErrorKind::invalid_input, "one penalty per process required");
    stride.resize(spaces.size());
    for (std::size_t j = spaces.size(); j-- > 0;) {
      stride[j] = states;
      if (states > 1000000 / spaces[j].size())
        fail(ErrorKind::invalid_input, "joint state space exceeds 1e6 states");
      states *= spaces[j].size();
    }
    for (std::size_t j = 0; j < spaces.size(); ++j) {
      std::vector<double> c;
      for (std::size_t i = 0; i < spaces[j].size(); ++i) c.push_back(pens[j](spaces[j].belief(i)));
      cost.push_back(std::move(c));
    }
  }

  std::size_t processes() const { return spaces.size(); }
  std::size_t index_of(const std::vector<std::size_t>& pos) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < pos.size(); ++j) k += stride[j] * pos[j];
    return k;
  }
};

struct JointSolution {
  double g = 0.0;
  std::vector<double> V;
  std::vector<std::uint8_t> action;  ///< process to activate, per joint state
  long long iterations = 0;
  double span = 0.0;
};

namespace detail {

// Calls f(k, digits) for every joint state in index order.
template <class F>
void for_each_joint(const JointMDP& m, F&& f) {
  const std::size_t M = m.processes();
  std::vector<std::size_t> d(M, 0);
  for (std::size_t k = 0; k < m.states; ++k) {
    f(k, d);
    for (std::size_t j = M; j-- > 0;) {
      if (++d[j] < m.spaces[j].size()) break;
      d[j] = 0;
    }
  }
}

inline void joint_q(const JointMDP& m, const std::vector<double>& V,
                    const std::vector<std::size_t>& d, double* q) {
  const std::size_t M = m.processes();
  std::size_t base = 0;
  for (std::size_t j = 0; j < M; ++j) base += m.stride[j] * m.spaces[j].successor(d[j]);
  for (std::size_t a = 0; a < M; ++a) {
    const auto& sp = m.spaces[a];
    const std::size_t rest = base - m.stride[a] * sp.successor(d[a]);
    const double b = sp.belief(d[a]);
    q[a] = (1.0 - b) * V[rest + m.stride[a] * sp.p_position()] +
           b * V[rest + m.stride[a] * sp.q_position()];
  }
}

}  // namespace detail

/// Relative value iteration on the product space (same damping as the
/// single-bandit solver).
inline JointSolution solve_joint(const JointMDP& m, double eps = 1e-9,
                                 long long max_iter = 100000, double tie_tol = 1e-10) {
  const std::size_t M = m.processes();
  std::vector<std::size_t> ref_pos(M);
  for (std::size_t j = 0; j < M; ++j) ref_pos[j] = m.spaces[j].p_position();
  const std::size_t ref = m.index_of(ref_pos);

  std::vector<double> c(m.states);
  detail::for_each_joint(m, [&](std::size_t k, const std::vector<std::size_t>& d) {
    double s = 0.0;
    for (std::size_t j = 0; j < M; ++j) s += m.cost[j][d[j]];
    c[k] = s;
  });

  JointSolution sol;
  sol.V.assign(m.states, 0.0);
  std::vector<double> Z(m.states);
  double gh = 0.0, span = std::numeric_limits<double>::infinity();
  long long it = 0;
  double q[3];
  while (it < max_iter) {
    ++it;
    double dmax = -std::numeric_limits<double>::infinity();
    double dmin = std::numeric_limits<double>::infinity();
    detail::for_each_joint(m, [&](std::size_t k, const std::vector<std::size_t>& d) {
      detail::joint_q(m, sol.V, d, q);
      double best = q[0];
      for (std::size_t a = 1; a < M; ++a) best = std::min(best, q[a]);
      Z[k] = 0.5 * sol.V[k] + 0.5 * (c[k] + best);
      const double diff = Z[k] - sol.V[k];
      dmax = std::max(dmax, diff);
      dmin = std::min(dmin, diff);
    });
    gh = dmax;
    span = dmax - dmin;
    const double shift = Z[ref];
    for (std::size_t k = 0; k < m.states; ++k) sol.V[k] = Z[k] - shift;
    if (span <= eps) break;
  }
  if (span > eps)
    fail(ErrorKind::convergence, "joint RVI did not converge; last span " + std::to_string(span));
  sol.g = 2.0 * gh;
  sol.iterations = it;
  sol.span = span;
  sol.action.assign(m.states, 0);
  detail::for_each_joint(m, [&](std::size_t k, const std::vector<std::size_t>& d) {
    detail::joint_q(m, sol.V, d, q);
    std::size_t arg = 0;
    for (std::size_t a = 1; a < M; ++a)
      if (q[a] < q[arg] - tie_tol) arg = a;
    sol.action[k] = static_cast<std::uint8_t>(arg);
  });
  return sol;
}

}  // namespace uoi
