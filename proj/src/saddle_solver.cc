#include "robust_hedge/saddle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "robust_hedge/corner_solver.hpp"

namespace robust_hedge {

namespace {

constexpr double kTieTol = 1e-12;

bool negligible(double delta, double magnitude) {
  return std::abs(delta) <= 1e-14 * magnitude;
}

// Point at fraction t along [lo, hi], exact at the endpoints.
double along(double lo, double hi, double t) {
  if (t <= 0.0) return lo;
  if (t >= 1.0) return hi;
  return std::min(hi, lo + t * (hi - lo));
}

void require_regular(const UncertaintyRect& rect) {
  if (!rect.appendix_regular()) {
    throw NotAppendixRegular(fmt::format(
        "rectangle [{}, {}] x [{}, {}] needs 0 < mu_min < mu_max and 0 < sigma_min < sigma_max; "
        "use the corner route",
        rect.mu_min(), rect.mu_max(), rect.sigma_min(), rect.sigma_max()));
  }
}

// +1 / -1 when h0 x + h1 y has that strict sign on every corner, else 0.
int linear_sign(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const ParamPoint& c : rect.corners()) {
    const double v = decomp.h0() * c.mu + decomp.h1() * c.sigma;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > 0.0) return 1;
  if (hi < 0.0) return -1;
  return 0;
}

}  // namespace

FracSegment FracSegment::from_moments(double lin0, double dlin, double den0, double dden) {
  FracSegment s;
  s.n0_ = lin0;
  s.n1_ = dlin;
  s.d0_ = den0;
  s.d1_ = dden;
  const bool flat_den = negligible(dden, std::max(std::abs(den0), std::abs(den0 + dden)));
  const bool flat_num = negligible(dlin, std::abs(lin0) + std::abs(lin0 + dlin));
  if (flat_den) {
    s.d1_ = 0.0;
    if (flat_num) {
      s.n1_ = 0.0;
      s.degenerate_ = SegmentDegeneracy::kConstant;
    } else {
      s.degenerate_ = SegmentDegeneracy::kPureQuadratic;
      s.alpha_ = -lin0 / dlin;
    }
    return s;
  }
  s.beta_ = -den0 / dden;
  if (flat_num) {
    s.n1_ = 0.0;
    s.degenerate_ = SegmentDegeneracy::kFixedNumerator;
    return s;
  }
  s.alpha_ = -lin0 / dlin;
  s.gamma_ = dlin * dlin / dden;
  return s;
}

FracSegment FracSegment::from_coefficients(double alpha, double beta, double gamma) {
  if (!(gamma != 0.0) || !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw InvalidInput(fmt::format("invalid segment coefficients ({}, {}, {})", alpha, beta, gamma));
  }
  FracSegment s;
  s.n0_ = -alpha;
  s.n1_ = 1.0;
  s.d0_ = -beta / gamma;
  s.d1_ = 1.0 / gamma;
  s.alpha_ = alpha;
  s.beta_ = beta;
  s.gamma_ = gamma;
  return s;
}

FracSegment FracSegment::between(ParamPoint a, ParamPoint c, const ClaimDecomposition& decomp) {
  const double lin_a = decomp.h0() * a.mu + decomp.h1() * a.sigma;
  const double lin_c = decomp.h0() * c.mu + decomp.h1() * c.sigma;
  const double den_a = a.mu * a.mu + a.sigma * a.sigma;
  const double den_c = c.mu * c.mu + c.sigma * c.sigma;
  return from_moments(lin_a, lin_c - lin_a, den_a, den_c - den_a);
}

double FracSegment::value(double t) const {
  const double num = n0_ + n1_ * t;
  return num * num / (d0_ + d1_ * t);
}

SegmentMinimum phi_segment_minimizer(const FracSegment& seg) {
  const auto at = [&](double t, SegmentBranch branch) {
    return SegmentMinimum{t, seg.value(t), branch};
  };

  switch (seg.degenerate()) {
    case SegmentDegeneracy::kConstant:
      return at(0.0, SegmentBranch::kConstant);
    case SegmentDegeneracy::kPureQuadratic:
      return at(std::clamp(seg.alpha(), 0.0, 1.0), SegmentBranch::kPureQuadratic);
    case SegmentDegeneracy::kFixedNumerator:
      // Constant numerator over an affine denominator: take the larger denominator.
      return at(seg.value(1.0) < seg.value(0.0) ? 1.0 : 0.0, SegmentBranch::kFixedNumerator);
    case SegmentDegeneracy::kNone:
      break;
  }

  const double alpha = seg.alpha();
  const double beta = seg.beta();
  const double gamma = seg.gamma();
  if (beta >= 0.0 && beta <= 1.0) {
    throw InvalidInput(fmt::format("segment pole {} lies inside [0, 1]", beta));
  }
  if (std::abs(alpha - beta) <= 1e-15 * std::max(1.0, std::abs(beta))) {
    // phi = gamma (t - alpha), monotone.
    return at(gamma > 0.0 ? 0.0 : 1.0, SegmentBranch::kLinear);
  }
  const bool convex_side = (gamma > 0.0 && beta < 0.0) || (gamma < 0.0 && beta > 1.0);
  if (!convex_side) {
    const double v0 = seg.value(0.0);
    const double v1 = seg.value(1.0);
    return v1 < v0 ? at(1.0, SegmentBranch::kConcave) : at(0.0, SegmentBranch::kConcave);
  }

  const double reflected = 2.0 * beta - alpha;
  if (gamma > 0.0) {
    if (1.0 <= alpha || 1.0 <= reflected) return at(1.0, SegmentBranch::kUpperEnd);
    if ((beta <= alpha && alpha <= 0.0) || (beta < reflected && reflected <= 0.0)) {
      return at(0.0, SegmentBranch::kLowerEnd);
    }
    if (0.0 < alpha && alpha < 1.0) return at(alpha, SegmentBranch::kAlpha);
    return at(reflected, SegmentBranch::kReflected);
  }
  if ((1.0 <= alpha && alpha <= beta) || (1.0 <= reflected && reflected < beta)) {
    return at(1.0, SegmentBranch::kUpperEnd);
  }
  if (alpha <= 0.0 || 2.0 * beta <= alpha) return at(0.0, SegmentBranch::kLowerEnd);
  if (0.0 < alpha && alpha < 1.0) return at(alpha, SegmentBranch::kAlpha);
  return at(reflected, SegmentBranch::kReflected);
}

std::pair<double, double> min_over_pi(const ClaimDecomposition& decomp,
                                      const DiscreteMeasure& nu) {
  const double lin = nu.linear_moment(decomp);
  const double second = nu.second_moment();
  if (second <= 0.0) return {0.0, decomp.unhedged()};
  return {lin / second, std::max(0.0, decomp.unhedged() - lin * lin / second)};
}

double extreme_measure_second_moment(double x, double y, const UncertaintyRect& rect) {
  if (!rect.contains(x, y)) {
    throw InvalidInput(fmt::format("mean point ({}, {}) lies outside the rectangle", x, y));
  }
  return 2.0 * x * rect.mu_mid() + 2.0 * y * rect.sigma_mid() - rect.mu_min() * rect.mu_max() -
         rect.sigma_min() * rect.sigma_max();
}

double psi(double x, double y, const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  const double den = extreme_measure_second_moment(x, y, rect);
  const double lin = decomp.h0() * x + decomp.h1() * y;
  const double num = lin * lin;
  if (den > 0.0) return num / den;
  if (num == 0.0) return 0.0;
  throw PreconditionError(
      fmt::format("psi denominator {} is not positive at ({}, {})", den, x, y));
}

std::optional<ParamPoint> line_intersects_rect(const ClaimDecomposition& decomp,
                                               const UncertaintyRect& rect) {
  const double h0 = decomp.h0();
  const double h1 = decomp.h1();
  if (h0 == 0.0 && h1 == 0.0) return ParamPoint{rect.mu_min(), rect.sigma_min()};
  if (linear_sign(rect, decomp) != 0) return std::nullopt;

  const double slack = 1e-12 * rect.scale();
  if (h1 != 0.0) {
    for (double x : {rect.mu_min(), rect.mu_max()}) {
      const double y = -h0 * x / h1;
      if (y >= rect.sigma_min() - slack && y <= rect.sigma_max() + slack) {
        return ParamPoint{x, std::clamp(y, rect.sigma_min(), rect.sigma_max())};
      }
    }
  }
  if (h0 != 0.0) {
    for (double y : {rect.sigma_min(), rect.sigma_max()}) {
      const double x = -h1 * y / h0;
      if (x >= rect.mu_min() - slack && x <= rect.mu_max() + slack) {
        return ParamPoint{std::clamp(x, rect.mu_min(), rect.mu_max()), y};
      }
    }
  }
  // Rounding left the crossing between edges: fall back to the closest corner.
  ParamPoint best = rect.corners()[0];
  double best_abs = std::numeric_limits<double>::infinity();
  for (const ParamPoint& c : rect.corners()) {
    const double v = std::abs(h0 * c.mu + h1 * c.sigma);
    if (v < best_abs) {
      best_abs = v;
      best = c;
    }
  }
  return best;
}

FracSegment side_segment(SideLabel side, const UncertaintyRect& rect,
                         const ClaimDecomposition& decomp) {
  const double h0 = decomp.h0();
  const double h1 = decomp.h1();
  const double mu_lo = rect.mu_min();
  const double sg_lo = rect.sigma_min();
  switch (side) {
    case SideLabel::kMinusMinus:
    case SideLabel::kMinusPlus: {
      const double mu = side == SideLabel::kMinusMinus ? rect.mu_min() : rect.mu_max();
      return FracSegment::from_moments(h0 * mu + h1 * sg_lo, h1 * rect.sigma_width(),
                                       mu * mu + sg_lo * sg_lo,
                                       rect.sigma_max() * rect.sigma_max() - sg_lo * sg_lo);
    }
    case SideLabel::kPlusMinus:
    case SideLabel::kPlusPlus: {
      const double sg = side == SideLabel::kPlusMinus ? rect.sigma_min() : rect.sigma_max();
      return FracSegment::from_moments(h0 * mu_lo + h1 * sg, h0 * rect.mu_width(),
                                       mu_lo * mu_lo + sg * sg,
                                       rect.mu_max() * rect.mu_max() - mu_lo * mu_lo);
    }
    default:
      throw InvalidInput(fmt::format("'{}' is not a rectangle side", to_string(side)));
  }
}

SideSolution side_minimizer(SideLabel side, const UncertaintyRect& rect,
                            const ClaimDecomposition& decomp) {
  require_regular(rect);
  const FracSegment seg = side_segment(side, rect, decomp);
  const SegmentMinimum m = phi_segment_minimizer(seg);
  SideSolution s;
  s.side = side;
  s.t_star = m.t_star;
  s.phi_value = m.value;
  s.branch = m.branch;
  s.degenerate = seg.degenerate() != SegmentDegeneracy::kNone;
  switch (side) {
    case SideLabel::kMinusMinus:
      s.point = {rect.mu_min(), along(rect.sigma_min(), rect.sigma_max(), m.t_star)};
      break;
    case SideLabel::kMinusPlus:
      s.point = {rect.mu_max(), along(rect.sigma_min(), rect.sigma_max(), m.t_star)};
      break;
    case SideLabel::kPlusMinus:
      s.point = {along(rect.mu_min(), rect.mu_max(), m.t_star), rect.sigma_min()};
      break;
    default:
      s.point = {along(rect.mu_min(), rect.mu_max(), m.t_star), rect.sigma_max()};
      break;
  }
  return s;
}

PsiMinimum minimize_psi(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  require_regular(rect);
  if (linear_sign(rect, decomp) == 0) {
    throw PreconditionError("h0 x + h1 y changes sign on the rectangle; pi* = 0 there");
  }
  std::array<SideSolution, 4> sides;
  for (std::size_t i = 0; i < kSides.size(); ++i) sides[i] = side_minimizer(kSides[i], rect, decomp);

  std::size_t best = 0;
  for (std::size_t i = 1; i < sides.size(); ++i) {
    const double tol = kTieTol * std::max(sides[best].phi_value, sides[i].phi_value);
    if (sides[i].phi_value < sides[best].phi_value - tol) {
      best = i;
    } else if (sides[i].phi_value <= sides[best].phi_value + tol && sides[best].degenerate &&
               !sides[i].degenerate) {
      best = i;
    }
  }
  PsiMinimum out;
  out.x = sides[best].point.mu;
  out.y = sides[best].point.sigma;
  out.psi = sides[best].phi_value;
  out.side = sides[best].side;
  out.t_star = sides[best].t_star;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (i != best && std::abs(sides[i].phi_value - out.psi) <= kTieTol * std::max(1.0, out.psi)) {
      ++out.ties;
    }
  }
  return out;
}

DiscreteMeasure worst_case_measure(double x_star, double y_star, SideLabel side,
                                   const UncertaintyRect& rect) {
  const auto two_point = [&](double p_low, ParamPoint low, ParamPoint high) {
    if (p_low >= 1.0) return DiscreteMeasure({Atom{low.mu, low.sigma, 1.0}}, rect);
    if (p_low <= 0.0) return DiscreteMeasure({Atom{high.mu, high.sigma, 1.0}}, rect);
    return DiscreteMeasure({Atom{low.mu, low.sigma, p_low}, Atom{high.mu, high.sigma, 1.0 - p_low}},
                           rect);
  };
  switch (side) {
    case SideLabel::kMinusMinus:
    case SideLabel::kMinusPlus: {
      const double mu = side == SideLabel::kMinusMinus ? rect.mu_min() : rect.mu_max();
      if (rect.sigma_width() <= 0.0) return DiscreteMeasure({Atom{mu, rect.sigma_min(), 1.0}}, rect);
      const double p = std::clamp((rect.sigma_max() - y_star) / rect.sigma_width(), 0.0, 1.0);
      return two_point(p, {mu, rect.sigma_min()}, {mu, rect.sigma_max()});
    }
    case SideLabel::kPlusMinus:
    case SideLabel::kPlusPlus: {
      const double sg = side == SideLabel::kPlusMinus ? rect.sigma_min() : rect.sigma_max();
      if (rect.mu_width() <= 0.0) return DiscreteMeasure({Atom{rect.mu_min(), sg, 1.0}}, rect);
      const double p = std::clamp((rect.mu_max() - x_star) / rect.mu_width(), 0.0, 1.0);
      return two_point(p, {rect.mu_min(), sg}, {rect.mu_max(), sg});
    }
    default:
      return DiscreteMeasure({Atom{x_star, y_star, 1.0}}, rect);
  }
}

HedgeSolution solve_saddle(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  require_regular(rect);
  HedgeSolution sol;
  sol.method = Method::kSaddle;
  const double unhedged = decomp.unhedged();

  if (const auto crossing = line_intersects_rect(decomp, rect)) {
    sol.pi_star = 0.0;
    sol.value = unhedged;
    sol.worst_measure = DiscreteMeasure({Atom{crossing->mu, crossing->sigma, 1.0}}, rect);
    sol.witness = {crossing->mu, crossing->sigma, SideLabel::kInteriorLine};
    sol.diagnostics.route = "line-crossing";
    sol.diagnostics.psi_star = 0.0;
  } else {
    const int sign = linear_sign(rect, decomp);
    // F(pi; h) = F(-pi; -h): solve the positive case and flip pi.
    const ClaimDecomposition work = sign > 0 ? decomp : decomp.scaled(-1.0);
    const PsiMinimum m = minimize_psi(rect, work);
    DiscreteMeasure nu = worst_case_measure(m.x, m.y, m.side, rect);
    const auto [pi, inner_value] = min_over_pi(work, nu);
    sol.pi_star = sign * pi;
    sol.value = std::max(0.0, unhedged - m.psi);
    sol.worst_measure = std::move(nu);
    sol.witness = {m.x, m.y, m.side};
    sol.diagnostics.route = sign > 0 ? "boundary" : "boundary-negated";
    sol.diagnostics.psi_star = m.psi;
    sol.diagnostics.t_star = m.t_star;
    sol.diagnostics.ties = m.ties;
    if (std::abs(inner_value - sol.value) > 1e-10 * std::max(1.0, sol.value)) {
      sol.diagnostics.notes.push_back(
          fmt::format("inner minimum {} differs from h0^2+h1^2-psi* = {}", inner_value, sol.value));
    }
  }
  if (decomp.residual_variance()) sol.value_total = sol.value + *decomp.residual_variance();
  return sol;
}

HedgeSolution solve_auto(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  return rect.appendix_regular() ? solve_saddle(rect, decomp) : solve_corners(rect, decomp);
}

CapitalOptimum optimize_initial_capital(const UncertaintyRect& rect, const ClaimMoments& m) {
  constexpr int kScanPoints = 201;
  const double span = std::max({std::abs(rect.mu_max()), std::abs(rect.sigma_max()), 1.0});
  const double half = 3.0 * (std::abs(m.cov_wH) + span);
  const double lo = m.mean_H - half;
  const double step = 2.0 * half / (kScanPoints - 1);
  const auto grid = [&](int i) { return i == kScanPoints - 1 ? m.mean_H + half : lo + i * step; };
  const auto objective = [&](double x0) {
    return solve_auto(rect, decompose_from_moments(m, x0)).value;
  };

  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double v = objective(grid(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden-section search on the bracket around the best scan point.
  double a = grid(std::max(0, best - 1));
  double b = grid(std::min(kScanPoints - 1, best + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-8) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double x0_star = 0.5 * (a + b);
  if (objective(x0_star) > best_value) x0_star = grid(best);

  CapitalOptimum out;
  out.x0_star = x0_star;
  out.solution = solve_auto(rect, decompose_from_moments(m, x0_star));
  out.solution.diagnostics.notes.push_back(fmt::format("x0* = {:.17g}", x0_star));
  return out;
}

}  // namespace robust_hedge
