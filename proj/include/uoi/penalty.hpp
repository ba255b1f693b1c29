#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "uoi/error.hpp"

namespace uoi {

enum class PenaltyKind { entropy, mean_std, quadratic, reciprocal };

/// Concave penalty of the belief. Beliefs are clamped to
/// [1e-12, 1 - 1e-12] before evaluation.
struct Penalty {
  PenaltyKind kind = PenaltyKind::entropy;
  double alpha0 = -1.0;
  double alpha1 = 2.0;
  double beta = 0.5;
  double c = 20.0;

  static Penalty entropy() { return {}; }
  static Penalty mean_std(double a0 = -1.0, double a1 = 2.0, double b = 0.5) {
    Penalty f;
    f.kind = PenaltyKind::mean_std;
    f.alpha0 = a0;
    f.alpha1 = a1;
    f.beta = b;
    return f;
  }
  static Penalty quadratic() {
    Penalty f;
    f.kind = PenaltyKind::quadratic;
    return f;
  }
  static Penalty reciprocal(double c = 20.0) {
    Penalty f;
    f.kind = PenaltyKind::reciprocal;
    f.c = c;
    return f;
  }

  double operator()(double w) const {
    w = std::clamp(w, 1e-12, 1.0 - 1e-12);
    switch (kind) {
      case PenaltyKind::entropy:
        return -w * std::log2(w) - (1.0 - w) * std::log2(1.0 - w);
      case PenaltyKind::mean_std: {
        const double m = alpha1 * w + alpha0 * (1.0 - w);
        const double var = alpha1 * alpha1 * w + alpha0 * alpha0 * (1.0 - w) - m * m;
        return m + beta * std::sqrt(std::max(var, 0.0));
      }
      case PenaltyKind::quadratic: {
        const double d = 2.0 * w - 1.0;
        return 1.0 - d * d;
      }
      case PenaltyKind::reciprocal:
        return c - 1.0 / w;
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case PenaltyKind::entropy: return "entropy";
      case PenaltyKind::mean_std: return "mean-std";
      case PenaltyKind::quadratic: return "quadratic";
      case PenaltyKind::reciprocal: return "reciprocal";
    }
    return "unknown";
  }
};

inline double eval(const Penalty& f, double w) {
  const double v = f(w);
  if (!std::isfinite(v)) fail(ErrorKind::numerical, "penalty " + f.name() + " is not finite");
  return v;
}

/// Random midpoint test of concavity; throws on the first violation.
template <class Pen>
void check_concave(const Pen& f, int samples = 20000, std::uint64_t seed = 7,
                   double slack = 1e-10) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < samples; ++i) {
    const double a = u(gen), b = u(gen), t = u(gen);
    const double lhs = f(t * a + (1.0 - t) * b);
    const double rhs = t * f(a) + (1.0 - t) * f(b);
    // slack scales with magnitude; c - 1/w reaches 1e6 near the boundary
    if (lhs < rhs - slack * std::max(1.0, std::abs(rhs)))
      fail(ErrorKind::invalid_input, "penalty is not concave");
  }
}

}  // namespace uoi
