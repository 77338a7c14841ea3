// Randomization route.
//
// Replacing the adversary's point choice by a measure nu on the rectangle
// makes the problem linear in nu, so min-max equals max-min. The inner
// minimum over pi is explicit and the outer maximum over nu reduces to
// minimizing
//
//   psi(x, y) = (h0 x + h1 y)^2 / (2 mu_M x + 2 sigma_M y - mu- mu+ - sigma- sigma+)
//
// over the means (x, y) of nu; the denominator is the largest second moment
// any measure with those means can have, attained by a two-point
// (bang-bang) law in each coordinate. When the line h0 x + h1 y = 0 misses
// the rectangle the minimum sits on one of its four sides, where psi
// restricted to the side is a quadratic-over-linear function of one
// variable with a closed-form minimizer.
#pragma once

#include <array>
#include <optional>
#include <utility>

#include "robust_hedge/decompose.hpp"
#include "robust_hedge/model.hpp"

namespace robust_hedge {

enum class SegmentDegeneracy {
  kNone,
  /// Numerator and denominator both constant.
  kConstant,
  /// Constant denominator, varying numerator.
  kPureQuadratic,
  /// Constant numerator, varying denominator.
  kFixedNumerator,
};

/// phi(t) = (n0 + n1 t)^2 / (d0 + d1 t) on [0, 1]; when nondegenerate this is
/// gamma (t - alpha)^2 / (t - beta).
class FracSegment {
 public:
  /// Segment between two measures' (linear, second) moments: linear moment
  /// moves from `lin0` to `lin0 + dlin`, second moment from `den0` to `den0 + dden`.
  static FracSegment from_moments(double lin0, double dlin, double den0, double dden);

  /// Nondegenerate segment from (alpha, beta, gamma).
  static FracSegment from_coefficients(double alpha, double beta, double gamma);

  /// Segment for the convex combination t * delta_c + (1 - t) * delta_a.
  static FracSegment between(ParamPoint a, ParamPoint c, const ClaimDecomposition& decomp);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  SegmentDegeneracy degenerate() const { return degenerate_; }

  double value(double t) const;

 private:
  FracSegment() = default;

  double n0_ = 0.0;
  double n1_ = 0.0;
  double d0_ = 0.0;
  double d1_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  SegmentDegeneracy degenerate_ = SegmentDegeneracy::kNone;
};

/// Which row of the minimizer table produced t*.
enum class SegmentBranch {
  kAlpha,
  kReflected,  // 2 beta - alpha
  kLowerEnd,
  kUpperEnd,
  kLinear,  // alpha == beta
  kConstant,
  kPureQuadratic,
  kFixedNumerator,
  kConcave,  // interval on the concave side of the pole: best endpoint
};

struct SegmentMinimum {
  double t_star = 0.0;
  double value = 0.0;
  SegmentBranch branch = SegmentBranch::kLowerEnd;
};

/// Constrained minimizer of phi over [0, 1].
SegmentMinimum phi_segment_minimizer(const FracSegment& seg);

struct SideSolution {
  SideLabel side = SideLabel::kMinusMinus;
  double t_star = 0.0;
  double phi_value = 0.0;
  ParamPoint point;
  SegmentBranch branch = SegmentBranch::kLowerEnd;
  bool degenerate = false;
};

/// Side labels: "--" is x = mu-, "-+" is x = mu+, "+-" is y = sigma-,
/// "++" is y = sigma+. t runs from the (mu-, sigma-) end of each side.
inline constexpr std::array<SideLabel, 4> kSides = {SideLabel::kMinusMinus, SideLabel::kMinusPlus,
                                                    SideLabel::kPlusMinus, SideLabel::kPlusPlus};

/// Optimal pi and value for a fixed measure.
std::pair<double, double> min_over_pi(const ClaimDecomposition& decomp, const DiscreteMeasure& nu);

/// Largest E(mu^2 + sigma^2) over measures on `rect` with means (x, y).
double extreme_measure_second_moment(double x, double y, const UncertaintyRect& rect);

double psi(double x, double y, const UncertaintyRect& rect, const ClaimDecomposition& decomp);

/// A point of {h0 x + h1 y = 0} inside the rectangle, if any.
std::optional<ParamPoint> line_intersects_rect(const ClaimDecomposition& decomp,
                                               const UncertaintyRect& rect);

/// The side's FracSegment built from the closed-form side coefficients.
FracSegment side_segment(SideLabel side, const UncertaintyRect& rect,
                         const ClaimDecomposition& decomp);

SideSolution side_minimizer(SideLabel side, const UncertaintyRect& rect,
                            const ClaimDecomposition& decomp);

struct PsiMinimum {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  SideLabel side = SideLabel::kMinusMinus;
  double t_star = 0.0;
  int ties = 0;
};

/// Requires an appendix-regular rectangle and h0 x + h1 y of one strict sign on it.
PsiMinimum minimize_psi(const UncertaintyRect& rect, const ClaimDecomposition& decomp);

/// Bang-bang measure with means (x*, y*) on the named side.
DiscreteMeasure worst_case_measure(double x_star, double y_star, SideLabel side,
                                   const UncertaintyRect& rect);

/// Throws NotAppendixRegular outside 0 < mu- < mu+, 0 < sigma- < sigma+.
HedgeSolution solve_saddle(const UncertaintyRect& rect, const ClaimDecomposition& decomp);

/// Saddle route when the rectangle is appendix-regular, corner route otherwise.
HedgeSolution solve_auto(const UncertaintyRect& rect, const ClaimDecomposition& decomp);

struct CapitalOptimum {
  double x0_star = 0.0;
  HedgeSolution solution;
};

/// Minimizes the minimax value over the initial capital x0 (h0 = EH - x0).
CapitalOptimum optimize_initial_capital(const UncertaintyRect& rect, const ClaimMoments& m);

}  // namespace robust_hedge
