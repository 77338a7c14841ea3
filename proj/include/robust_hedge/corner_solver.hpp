// Corner route.
//
// For fixed pi, F is a sum of squares of affine functions of (mu, sigma),
// hence convex, so its maximum over the rectangle sits at a corner. The
// outer problem is then to minimize the upper envelope of four convex
// quadratics in one variable; by a Helly-type argument on the line, that
// minimum equals the largest over corner pairs of the pairwise minimax.
#pragma once

#include <array>

#include "robust_hedge/model.hpp"

namespace robust_hedge {

/// f(pi) = constant - 2 linear_coef pi + curvature pi^2 = F(pi, mu, sigma).
struct CornerQuadratic {
  double mu = 0.0;
  double sigma = 0.0;
  double constant = 0.0;     // h0^2 + h1^2
  double linear_coef = 0.0;  // h0 mu + h1 sigma
  double curvature = 0.0;    // mu^2 + sigma^2

  double operator()(double pi) const { return constant - 2.0 * linear_coef * pi + curvature * pi * pi; }

  /// Unconstrained minimizer; 0 when the curvature vanishes.
  double minimizer() const { return curvature > 0.0 ? linear_coef / curvature : 0.0; }

  double min_value() const;
};

CornerQuadratic corner_quadratic(double mu, double sigma, const ClaimDecomposition& decomp);

enum class PairCase {
  kOppositeSign,       // linear coefficients of opposite sign: pi = 0
  kLowerCurvatureMin,  // minimizer of the flatter quadratic
  kHigherCurvatureMin, // minimizer of the steeper quadratic
  kCrossing,           // the nonzero root of f_a = f_c
  kEqualCurvature,
  kBothFlat,
};

struct PairMinimax {
  double pi = 0.0;
  double value = 0.0;
  PairCase pair_case = PairCase::kBothFlat;
};

/// argmin / min of max(f_a, f_c). Requires curvature(a) <= curvature(c).
PairMinimax pair_minimax(const CornerQuadratic& a, const CornerQuadratic& c,
                         const ClaimDecomposition& decomp);

HedgeSolution solve_corners(const UncertaintyRect& rect, const ClaimDecomposition& decomp);

}  // namespace robust_hedge
