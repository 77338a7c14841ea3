#include "robust_hedge/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "robust_hedge/saddle_solver.hpp"
#include "test_util.hpp"

namespace robust_hedge::oracle {
namespace {

using testing::random_claim;
using testing::random_regular_rect;
using testing::uniform;

const UncertaintyRect kUnit(1, 2, 1, 2);
const ClaimDecomposition kOnes(1, 1);

TEST(CornerMax, Examples) {
  const CornerMax at_zero = corner_max(0, kUnit, kOnes);
  EXPECT_DOUBLE_EQ(at_zero.value, 2.0);
  EXPECT_DOUBLE_EQ(at_zero.argmax.mu, 1.0);
  EXPECT_DOUBLE_EQ(at_zero.argmax.sigma, 1.0);
  const CornerMax at_one = corner_max(1, kUnit, kOnes);
  EXPECT_DOUBLE_EQ(at_one.value, 2.0);
  EXPECT_DOUBLE_EQ(at_one.argmax.mu, 2.0);
  EXPECT_DOUBLE_EQ(at_one.argmax.sigma, 2.0);
  EXPECT_NEAR(corner_max(2.0 / 3, kUnit, kOnes).value, 2.0 / 9, 1e-15);
}

TEST(ExactPiecewiseMin, Examples) {
  const Minimum m = exact_piecewise_min(kUnit, kOnes);
  EXPECT_NEAR(m.pi, 2.0 / 3, 1e-15);
  EXPECT_NEAR(m.value, 2.0 / 9, 1e-15);

  const Minimum cross = exact_piecewise_min(kUnit, ClaimDecomposition(1, -1));
  EXPECT_DOUBLE_EQ(cross.pi, 0.0);
  EXPECT_DOUBLE_EQ(cross.value, 2.0);

  const std::array<ParamPoint, 1> single{ParamPoint{2, 0}};
  const Minimum one = exact_piecewise_min(single, ClaimDecomposition(3, 5));
  EXPECT_DOUBLE_EQ(one.pi, 1.5);
  EXPECT_DOUBLE_EQ(one.value, 25.0);
}

TEST(ExactPiecewiseMin, OrderInvariant) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const UncertaintyRect r = random_regular_rect(rng);
    const ClaimDecomposition d = random_claim(rng);
    auto corners = r.corners();
    const Minimum base = exact_piecewise_min(corners, d);
    std::shuffle(corners.begin(), corners.end(), rng);
    const Minimum shuffled = exact_piecewise_min(corners, d);
    EXPECT_EQ(base.value, shuffled.value);
  }
}

TEST(ExactPiecewiseMin, NoGridPointBelowIt) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const UncertaintyRect r = random_regular_rect(rng);
    const ClaimDecomposition d = random_claim(rng);
    const Minimum m = exact_piecewise_min(r, d);
    EXPECT_NEAR(corner_max(m.pi, r, d).value, m.value, 1e-12 * (1 + m.value));
    for (int i = -2000; i <= 2000; ++i) {
      const double pi = m.pi + i * 1e-3;
      EXPECT_GE(corner_max(pi, r, d).value, m.value - 1e-12 * (1 + m.value));
    }
  }
}

TEST(BruteForce, Examples) {
  const BruteForceResult zero = brute_force_minimax(kUnit, ClaimDecomposition(0, 0), 201, 21);
  EXPECT_NEAR(zero.pi, 0.0, 1e-12);
  EXPECT_NEAR(zero.value, 0.0, 1e-12);

  const UncertaintyRect point(1, 1, 1, 1);
  const BruteForceResult p = brute_force_minimax(point, kOnes, 2001, 3);
  EXPECT_NEAR(p.pi, 1.0, 1e-4);
  EXPECT_NEAR(p.value, 0.0, 1e-8);

  const BruteForceResult fx = brute_force_minimax(kUnit, kOnes, 2001, 201);
  EXPECT_NEAR(fx.value, 2.0 / 9, 1e-4);
  EXPECT_NEAR(fx.pi, 2.0 / 3, 1e-4);
  EXPECT_LE(fx.dominance_excess, 0.0);

  EXPECT_THROW(brute_force_minimax(kUnit, kOnes, 1, 201), InvalidInput);
}

TEST(BruteForce, AgreesWithExact) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const UncertaintyRect r = random_regular_rect(rng);
    const ClaimDecomposition d = random_claim(rng);
    const Minimum e = exact_piecewise_min(r, d);
    const BruteForceResult b = brute_force_minimax(r, d, 2001, 201);
    EXPECT_GE(b.value, e.value - 1e-12 * (1 + e.value));
    EXPECT_LE(b.value - e.value, 1e-4);
  }
}

TEST(LatticeMax, SeparableEqualsTwoDimensional) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const UncertaintyRect r(uniform(rng, -2, 1), uniform(rng, 1, 3), uniform(rng, 0, 1),
                            uniform(rng, 1, 3));
    const ClaimDecomposition d = random_claim(rng);
    const double pi = uniform(rng, -3, 3);
    EXPECT_DOUBLE_EQ(lattice_max(pi, r, d, 31), lattice_max_2d(pi, r, d, 31));
    EXPECT_LE(lattice_max(pi, r, d, 31), corner_max(pi, r, d).value * (1 + 1e-12));
  }
}

TEST(CheckSaddle, PassesForSolutionAndFailsWhenPerturbed) {
  const HedgeSolution s = solve_saddle(kUnit, kOnes);
  const SaddleReport ok = check_saddle(s, kUnit, kOnes, 100, 1);
  EXPECT_TRUE(ok.pass);
  EXPECT_FALSE(ok.partial);

  HedgeSolution bad = s;
  bad.pi_star += 0.1;
  EXPECT_FALSE(check_saddle(bad, kUnit, kOnes, 100, 1).pass);

  HedgeSolution low = s;
  low.value -= 0.01;
  EXPECT_FALSE(check_saddle(low, kUnit, kOnes, 100, 1).pass);
}

TEST(CheckSaddle, LineCrossingSolution) {
  const ClaimDecomposition d(1, -1);
  const HedgeSolution s = solve_saddle(kUnit, d);
  EXPECT_TRUE(check_saddle(s, kUnit, d, 100, 7).pass);
}

TEST(CheckSaddle, VerdictIndependentOfSeed) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const UncertaintyRect r = random_regular_rect(rng);
    const ClaimDecomposition d = random_claim(rng);
    const HedgeSolution s = solve_saddle(r, d);
    for (std::uint64_t seed : {1u, 2u, 99u}) EXPECT_TRUE(check_saddle(s, r, d, 50, seed).pass);
  }
}

}  // namespace
}  // namespace robust_hedge::oracle
