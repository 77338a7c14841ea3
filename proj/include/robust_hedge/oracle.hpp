// Ground truth for the closed-form solvers. Nothing here calls into
// saddle_solver or corner_solver.
#pragma once

#include <cstdint>
#include <span>

#include "robust_hedge/model.hpp"

namespace robust_hedge::oracle {

struct CornerMax {
  double value = 0.0;
  ParamPoint argmax;
};

/// max over the four corners of eval_F; ties go to the earliest corner in
/// the order (--, -+, +-, ++).
CornerMax corner_max(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp);

struct Minimum {
  double pi = 0.0;
  double value = 0.0;
};

/// Minimizes max_i eval_F(pi, corners[i]) by evaluating the envelope at every
/// quadratic's vertex and every pairwise crossing.
Minimum exact_piecewise_min(std::span<const ParamPoint> corners, const ClaimDecomposition& decomp);

Minimum exact_piecewise_min(const UncertaintyRect& rect, const ClaimDecomposition& decomp);

struct BruteForceResult {
  double pi = 0.0;
  double value = 0.0;
  /// Half-width of the final bracket scanned.
  double bracket = 0.0;
  /// Spacing of the refinement grid.
  double resolution = 0.0;
  /// Largest observed |g(pi_{k+1}) - g(pi_k)| / resolution on the refinement grid.
  double slope = 0.0;
  /// Largest lattice-over-corner excess seen (<= 0 when corners dominate).
  double dominance_excess = 0.0;
};

/// Grid search: inner max over a param_grid x param_grid lattice on the
/// rectangle, outer min over pi_grid points, then one refinement pass over
/// the bracket around the incumbent. Throws std::logic_error if any lattice
/// point beats the corner maximum by more than 1e-12 (relative).
BruteForceResult brute_force_minimax(const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                                     int pi_grid, int param_grid);

/// Lattice maximum by explicit 2-D enumeration; used to cross-check the
/// separable evaluation inside brute_force_minimax.
double lattice_max_2d(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                      int param_grid);

/// Lattice maximum via max over mu of (h0 - pi mu)^2 plus max over sigma of (h1 - pi sigma)^2.
double lattice_max(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                   int param_grid);

struct SaddleReport {
  bool pass = false;
  /// Worst F(pi*, nu) - value over sampled point masses (positive is a violation).
  double max_upper_violation = 0.0;
  /// Worst value - F(pi, nu*) over sampled pi (positive is a violation).
  double max_lower_violation = 0.0;
  bool partial = false;
  std::uint64_t seed = 0;
  int samples = 0;
  double tolerance = 1e-10;
};

/// Samples point masses on the rectangle and hedge ratios around pi* and
/// checks both saddle inequalities.
SaddleReport check_saddle(const HedgeSolution& sol, const UncertaintyRect& rect,
                          const ClaimDecomposition& decomp, int n_samples, std::uint64_t seed,
                          double tolerance = 1e-10);

}  // namespace robust_hedge::oracle
