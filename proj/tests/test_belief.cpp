#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "uoi/belief.hpp"

using namespace uoi;

namespace {

using Mat = std::array<std::array<double, 2>, 2>;

Mat mul(const Mat& a, const Mat& b) {
  Mat c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Mat mpow(double p, double q, int n) {
  const Mat P{{{1 - p, p}, {q, 1 - q}}};
  Mat r{{{1, 0}, {0, 1}}};
  for (int k = 0; k < n; ++k) r = mul(r, P);
  return r;
}

}  // namespace

TEST(BanditParams, RejectsOutOfRange) {
  EXPECT_THROW(BanditParams(0.0, 0.5), Error);
  EXPECT_THROW(BanditParams(0.5, 1.0), Error);
  EXPECT_THROW(BanditParams(-0.1, 0.5), Error);
}

TEST(BanditParams, RejectsConstantCase) {
  try {
    BanditParams(0.1, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(BanditParams, Classification) {
  EXPECT_TRUE(BanditParams(0.05, 0.2).monotonic());
  EXPECT_FALSE(BanditParams(0.8, 0.95).monotonic());
  EXPECT_EQ(BanditParams(0.7, 0.7).cls(), BanditClass::oscillating);
}

TEST(NStep, OneStepIsTheMatrix) {
  auto [pn, qn] = n_step(BanditParams(0.04, 0.2), 1);
  EXPECT_NEAR(pn, 0.04, 1e-15);
  EXPECT_NEAR(qn, 0.2, 1e-15);
}

TEST(NStep, LargeNApproachesEquilibrium) {
  auto [pn, qn] = n_step(BanditParams(0.1, 0.3), 500);
  EXPECT_NEAR(pn, 0.25, 1e-14);
  EXPECT_NEAR(qn, 0.75, 1e-14);
}

TEST(NStep, MatchesMatrixPower) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int t = 0; t < 200; ++t) {
    const double p = u(g), q = u(g);
    if (std::abs(p + q - 1) < 1e-3) continue;
    for (int n : {1, 2, 3, 7, 20}) {
      const Mat m = mpow(p, q, n);
      auto [pn, qn] = n_step(BanditParams(p, q), n);
      EXPECT_NEAR(pn, m[0][1], 1e-12);
      EXPECT_NEAR(qn, m[1][0], 1e-12);
    }
  }
  auto [p2, q2] = n_step(BanditParams(0.2, 0.4), 2);
  const Mat m = mpow(0.2, 0.4, 2);
  EXPECT_NEAR(p2, m[0][1], 1e-15);
  EXPECT_NEAR(q2, m[1][0], 1e-15);
  EXPECT_THROW(n_step(BanditParams(0.2, 0.4), 0), Error);
}

TEST(Tau, DirectValue) { EXPECT_DOUBLE_EQ(tau(BanditParams(0.2, 0.4), 0.5), 0.4); }

TEST(Tau, FixedPoint) {
  for (auto [p, q] : {std::pair{0.05, 0.2}, {0.8, 0.95}, {0.3, 0.3}, {0.9, 0.2}}) {
    BanditParams b(p, q);
    EXPECT_NEAR(tau(b, b.equilibrium()), b.equilibrium(), 1e-16);
  }
}

TEST(Tau, OscillatingCrossesEquilibrium) {
  BanditParams b(0.8, 0.95);
  const double ws = b.equilibrium();
  EXPECT_LT(0.1, ws);
  EXPECT_GT(tau(b, 0.1), ws);
}

TEST(TauK, ZeroIsIdentity) { EXPECT_EQ(tau_k(BanditParams(0.3, 0.1), 0.37, 0), 0.37); }

TEST(TauK, ClosedFormMatchesIteration) {
  BanditParams b(0.1, 0.3);
  double w = 0.9;
  for (int k = 0; k < 10; ++k) w = tau(b, w);
  EXPECT_NEAR(tau_k(b, 0.9, 10), w, 1e-14);

  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int t = 0; t < 300; ++t) {
    const double p = u(g), q = u(g), w0 = u(g);
    if (std::abs(p + q - 1) < 1e-3) continue;
    BanditParams bb(p, q);
    double x = w0;
    for (int k = 1; k <= 200; ++k) {
      x = tau(bb, x);
      ASSERT_NEAR(tau_k(bb, w0, k), x, 1e-12);
    }
  }
}

TEST(TauK, OscillatingAlternatesAndContracts) {
  BanditParams b(0.7, 0.7);
  const double ws = 0.5;
  EXPECT_LT(std::abs(tau_k(b, 0.2, 2) - ws), std::abs(tau_k(b, 0.2, 1) - ws));
  for (int k = 0; k < 20; ++k) {
    const double a = tau_k(b, 0.2, k) - ws, c = tau_k(b, 0.2, k + 1) - ws;
    EXPECT_LT(a * c, 0.0);
  }
}

TEST(TauK, MonotoneConvergence) {
  BanditParams b(0.05, 0.2);
  double prev = std::abs(0.9 - b.equilibrium());
  for (int k = 1; k < 60; ++k) {
    const double d = tau_k(b, 0.9, k) - b.equilibrium();
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Equilibrium, Values) {
  EXPECT_DOUBLE_EQ(equilibrium(BanditParams(0.05, 0.2)), 0.2);
  EXPECT_DOUBLE_EQ(equilibrium(BanditParams(0.3, 0.3)), 0.5);
  EXPECT_DOUBLE_EQ(equilibrium(BanditParams(0.8, 0.95)), 0.8 / 1.75);
}

TEST(MakeBelief, RejectsBoundary) {
  EXPECT_THROW(make_belief(0.0), Error);
  EXPECT_THROW(make_belief(1.0), Error);
  EXPECT_EQ(make_belief(0.25), 0.25);
}

TEST(BeliefOf, ConsistentWithTau) {
  BanditParams b(0.2, 0.45);
  for (int n = 1; n < 15; ++n) {
    EXPECT_NEAR(belief_of(b, {0, n}), tau_k(b, b.p(), n - 1), 1e-14);
    EXPECT_NEAR(belief_of(b, {1, n}), tau_k(b, 1 - b.q(), n - 1), 1e-14);
    EXPECT_NEAR(belief_of(b, {0, n}), n_step(b, n).first, 1e-14);
    EXPECT_NEAR(belief_of(b, {1, n}), 1 - n_step(b, n).second, 1e-14);
  }
}

TEST(TruncatedSpace, SevenStatesForCutoffThree) {
  TruncatedSpace sp(BanditParams(0.2, 0.4), 3);
  ASSERT_EQ(sp.size(), 7u);
  int near_star = 0;
  for (std::size_t i = 0; i < sp.size(); ++i) near_star += std::abs(sp.belief(i) - 1.0 / 3.0) < 1e-12;
  EXPECT_EQ(near_star, 1);
  EXPECT_NEAR(sp.belief(sp.equilibrium_position()), 1.0 / 3.0, 1e-16);
}

TEST(TruncatedSpace, CutoffIsSmallestWithinEpsilon) {
  // oracle: walk n until both tails are within epsilon
  for (auto [p, q, eps] : {std::tuple{0.5, 0.6, 1e-6}, {0.05, 0.2, 1e-9}, {0.9, 0.8, 1e-9}, {0.3, 0.1, 1e-4}}) {
    BanditParams b(p, q);
    int F = 1;
    while (!(std::abs(belief_of(b, {0, F}) - b.equilibrium()) < eps &&
             std::abs(belief_of(b, {1, F}) - b.equilibrium()) < eps))
      ++F;
    EXPECT_EQ(build_space(b, eps).cutoff(), F) << p << "," << q;
  }
}

TEST(TruncatedSpace, OrderedAndIndexed) {
  for (auto [p, q] : {std::pair{0.05, 0.2}, {0.8, 0.95}, {0.6, 0.1}}) {
    auto sp = build_space(BanditParams(p, q));
    ASSERT_EQ(sp.size(), 2u * sp.cutoff() + 1);
    for (std::size_t i = 1; i < sp.size(); ++i) EXPECT_LT(sp.belief(i - 1), sp.belief(i));
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (i == sp.equilibrium_position()) continue;
      EXPECT_EQ(sp.position(sp[i].state), i);
    }
    EXPECT_EQ(sp.position({0, sp.cutoff() + 1}), sp.equilibrium_position());
    EXPECT_EQ(sp.position({1, sp.cutoff() + 40}), sp.equilibrium_position());
    EXPECT_EQ(sp.successor(sp.equilibrium_position()), sp.equilibrium_position());
    EXPECT_EQ(sp.successor(sp.position({1, sp.cutoff()})), sp.equilibrium_position());
    EXPECT_DOUBLE_EQ(sp.belief(sp.p_position()), p);
    EXPECT_DOUBLE_EQ(sp.belief(sp.q_position()), 1 - q);
  }
}

TEST(TruncatedSpace, Errors) {
  EXPECT_THROW(TruncatedSpace(BanditParams(0.2, 0.4), 0), Error);
  EXPECT_THROW(build_space(BanditParams(0.2, 0.4), 0.0), Error);
  EXPECT_THROW(build_space(BanditParams(0.2, 0.4), 0.9), Error);
  // p = q = 0.25: p^(n) and 1 - q^(n) mirror each other but never collide
  EXPECT_NO_THROW(build_space(BanditParams(0.25, 0.25)));
}
