#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "uoi/belief.hpp"
#include "uoi/penalty.hpp"
#include "uoi/rvi.hpp"
#include "uoi/whittle.hpp"

namespace uoi {

struct ProcessSpec {
  BanditParams params;
  Penalty penalty;
};

enum class PolicyKind { whittle, myopic, optimal, round_robin };

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::whittle: return "whittle";
    case PolicyKind::myopic: return "myopic";
    case PolicyKind::optimal: return "optimal";
    case PolicyKind::round_robin: return "round-robin";
  }
  return "unknown";
}

inline PolicyKind parse_policy(const std::string& s) {
  if (s == "whittle") return PolicyKind::whittle;
  if (s == "myopic") return PolicyKind::myopic;
  if (s == "optimal") return PolicyKind::optimal;
  if (s == "round-robin") return PolicyKind::round_robin;
  fail(ErrorKind::invalid_input, "unknown policy '" + s + "'");
}

/// Stationary deterministic scheduler. Picks one process per slot; ties go
/// to the lowest process index.
///
/// Decisions are made on positions in each process's truncated space, so a
/// policy is tied to the spaces it was built with.
class Policy {
 public:
  static Policy whittle(std::vector<IndexTable> tables) {
    Policy p(PolicyKind::whittle);
    for (const auto& t : tables) p.spaces_.push_back(t.space);
    p.score_.reserve(tables.size());
    for (auto& t : tables) p.score_.push_back(std::move(t.by_position));
    return p;
  }

  static Policy whittle(const std::vector<ProcessSpec>& procs, double epsilon = 1e-9) {
    std::vector<IndexTable> tables;
    for (const auto& pr : procs) tables.push_back(build_table(pr.params, pr.penalty, epsilon));
    return whittle(std::move(tables));
  }

  static Policy myopic(const std::vector<ProcessSpec>& procs, double epsilon = 1e-9) {
    Policy p(PolicyKind::myopic);
    for (const auto& pr : procs) {
      p.spaces_.push_back(build_space(pr.params, epsilon));
      const auto& sp = p.spaces_.back();
      std::vector<double> s(sp.size());
      for (std::size_t i = 0; i < sp.size(); ++i) s[i] = pr.penalty(sp.belief(i));
      p.score_.push_back(std::move(s));
    }
    return p;
  }

  /// Oldest information first. With every process started at age 1 this
  /// cycles through them in index order.
  static Policy round_robin(const std::vector<ProcessSpec>& procs, double epsilon = 1e-9) {
    Policy p(PolicyKind::round_robin);
    for (const auto& pr : procs) {
      p.spaces_.push_back(build_space(pr.params, epsilon));
      const auto& sp = p.spaces_.back();
      std::vector<double> s(sp.size());
      for (std::size_t i = 0; i < sp.size(); ++i) s[i] = sp[i].state.age;
      p.score_.push_back(std::move(s));
    }
    return p;
  }

  static Policy optimal(const std::vector<ProcessSpec>& procs, double epsilon = 1e-9,
                        double rvi_epsilon = 1e-9) {
    std::vector<TruncatedSpace> sps;
    std::vector<Penalty> pens;
    for (const auto& pr : procs) {
      sps.push_back(build_space(pr.params, epsilon));
      pens.push_back(pr.penalty);
    }
    auto m = std::make_shared<JointMDP>(sps, pens);
    auto s = std::make_shared<JointSolution>(solve_joint(*m, rvi_epsilon));
    Policy p(PolicyKind::optimal);
    p.spaces_ = std::move(sps);
    p.joint_ = std::move(m);
    p.solution_ = std::move(s);
    return p;
  }

  static Policy make(PolicyKind k, const std::vector<ProcessSpec>& procs, double epsilon = 1e-9,
                     double rvi_epsilon = 1e-9) {
    switch (k) {
      case PolicyKind::whittle: return whittle(procs, epsilon);
      case PolicyKind::myopic: return myopic(procs, epsilon);
      case PolicyKind::optimal: return optimal(procs, epsilon, rvi_epsilon);
      case PolicyKind::round_robin: return round_robin(procs, epsilon);
    }
    fail(ErrorKind::invalid_input, "unknown policy kind");
  }

  PolicyKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }
  std::size_t processes() const { return spaces_.size(); }
  const std::vector<TruncatedSpace>& spaces() const { return spaces_; }
  /// Optimal average cost of the joint problem; only for the optimal kind.
  double optimal_gain() const {
    if (!solution_) fail(ErrorKind::invalid_input, "optimal_gain needs an optimal policy");
    return solution_->g;
  }

  std::size_t decide_positions(const std::vector<std::size_t>& pos) const {
    if (pos.size() != spaces_.size())
      fail(ErrorKind::invalid_input, "decide: expected " + std::to_string(spaces_.size()) + " states");
    if (kind_ == PolicyKind::optimal) return solution_->action[joint_->index_of(pos)];
    std::size_t arg = 0;
    for (std::size_t j = 1; j < pos.size(); ++j)
      if (score_[j][pos[j]] > score_[arg][pos[arg]]) arg = j;
    return arg;
  }

  std::size_t decide(const std::vector<InfoState>& states) const {
    std::vector<std::size_t> pos(states.size());
    for (std::size_t j = 0; j < states.size() && j < spaces_.size(); ++j) {
      if (kind_ == PolicyKind::optimal && states[j].age > spaces_[j].cutoff() + 1)
        fail(ErrorKind::invalid_input, "decide: state " + describe(states[j]) + " of process " +
                                           std::to_string(j) + " is outside the solved space");
      pos[j] = spaces_[j].position(states[j]);
    }
    return decide_positions(pos);
  }

 private:
  explicit Policy(PolicyKind k) : kind_(k) {}

  PolicyKind kind_;
  std::vector<TruncatedSpace> spaces_;
  std::vector<std::vector<double>> score_;  ///< per process, per position
  std::shared_ptr<const JointMDP> joint_;
  std::shared_ptr<const JointSolution> solution_;
};

}  // namespace uoi
