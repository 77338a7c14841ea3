#include "robust_hedge/corner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include <fmt/format.h>

namespace robust_hedge {

namespace {

constexpr double kCaseTol = 1e-12;

std::string_view case_name(PairCase c) {
  switch (c) {
    case PairCase::kOppositeSign: return "opposite-sign";
    case PairCase::kLowerCurvatureMin: return "lower-curvature-min";
    case PairCase::kHigherCurvatureMin: return "higher-curvature-min";
    case PairCase::kCrossing: return "crossing";
    case PairCase::kEqualCurvature: return "equal-curvature";
    case PairCase::kBothFlat: return "both-flat";
  }
  return "?";
}

// Side pairs before diagonals so that a tied diagonal never displaces a side.
constexpr std::array<std::pair<int, int>, 6> kPairs = {
    {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 3}, {1, 2}}};

// Mixture of two corners that makes `pi` optimal for the inner minimum.
std::optional<DiscreteMeasure> mixing_measure(const CornerQuadratic& a, const CornerQuadratic& c,
                                              double pi, const UncertaintyRect& rect) {
  if (a.mu == c.mu && a.sigma == c.sigma) {
    return DiscreteMeasure({Atom{a.mu, a.sigma, 1.0}}, rect);
  }
  const double num = pi * c.curvature - c.linear_coef;
  const double den = (a.linear_coef - c.linear_coef) - pi * (a.curvature - c.curvature);
  const double scale = std::abs(pi * c.curvature) + std::abs(c.linear_coef);
  double w = 0.0;
  if (std::abs(den) <= 1e-14 * std::max(1.0, scale)) {
    if (std::abs(num) > 1e-12 * std::max(1.0, scale)) return std::nullopt;
    w = 1.0;
  } else {
    w = num / den;
  }
  if (w < -1e-9 || w > 1.0 + 1e-9) return std::nullopt;
  w = std::clamp(w, 0.0, 1.0);
  if (w == 1.0) return DiscreteMeasure({Atom{a.mu, a.sigma, 1.0}}, rect);
  if (w == 0.0) return DiscreteMeasure({Atom{c.mu, c.sigma, 1.0}}, rect);
  return DiscreteMeasure({Atom{a.mu, a.sigma, w}, Atom{c.mu, c.sigma, 1.0 - w}}, rect);
}

SideLabel label_for(const DiscreteMeasure& nu, const UncertaintyRect& rect) {
  const auto& atoms = nu.atoms();
  if (atoms.size() == 1) return SideLabel::kPoint;
  const Atom& p = atoms[0];
  const Atom& q = atoms[1];
  if (p.mu == q.mu) return p.mu == rect.mu_min() ? SideLabel::kMinusMinus : SideLabel::kMinusPlus;
  if (p.sigma == q.sigma) {
    return p.sigma == rect.sigma_min() ? SideLabel::kPlusMinus : SideLabel::kPlusPlus;
  }
  return SideLabel::kPoint;
}

}  // namespace

double CornerQuadratic::min_value() const {
  return curvature > 0.0 ? constant - linear_coef * linear_coef / curvature : constant;
}

CornerQuadratic corner_quadratic(double mu, double sigma, const ClaimDecomposition& decomp) {
  return CornerQuadratic{mu, sigma, decomp.unhedged(), decomp.h0() * mu + decomp.h1() * sigma,
                         mu * mu + sigma * sigma};
}

PairMinimax pair_minimax(const CornerQuadratic& a, const CornerQuadratic& c,
                         const ClaimDecomposition& decomp) {
  if (a.curvature > c.curvature * (1.0 + kCaseTol)) {
    throw InvalidInput(fmt::format("pair must be ordered by curvature ({} > {})", a.curvature,
                                   c.curvature));
  }
  const double unhedged = decomp.unhedged();
  if (a.curvature <= 0.0 && c.curvature <= 0.0) return {0.0, unhedged, PairCase::kBothFlat};
  if (a.linear_coef * c.linear_coef <= 0.0) return {0.0, unhedged, PairCase::kOppositeSign};

  const auto envelope = [&](double pi) { return std::max(a(pi), c(pi)); };
  const double dk = c.curvature - a.curvature;
  if (dk <= kCaseTol * c.curvature) {
    // f_a - f_c is linear with its root at 0; the minimizer is one of three points.
    PairMinimax best{0.0, envelope(0.0), PairCase::kEqualCurvature};
    for (double p : {a.minimizer(), c.minimizer()}) {
      const double v = envelope(p);
      if (v < best.value) best = {p, v, PairCase::kEqualCurvature};
    }
    return best;
  }

  // Roots of f_a = f_c are 0 and `crossing`. Orient so both minimizers are positive.
  const double crossing = 2.0 * (c.linear_coef - a.linear_coef) / dk;
  const double s = a.linear_coef > 0.0 ? 1.0 : -1.0;
  const double ra = s * a.minimizer();
  const double rc = s * c.minimizer();
  const double b = s * crossing;
  const double tol = kCaseTol * std::max({std::abs(ra), std::abs(rc), std::abs(b)});
  if (ra > b + tol && rc > b + tol) {
    // Beyond the crossing the steeper quadratic is the envelope.
    return {c.minimizer(), c.min_value(), PairCase::kHigherCurvatureMin};
  }
  if (ra < b - tol && rc < b - tol) {
    // Between 0 and the crossing the flatter quadratic is the envelope.
    return {a.minimizer(), a.min_value(), PairCase::kLowerCurvatureMin};
  }
  return {crossing, envelope(crossing), PairCase::kCrossing};
}

HedgeSolution solve_corners(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  const auto corners = rect.corners();
  std::array<CornerQuadratic, 4> quads;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    quads[i] = corner_quadratic(corners[i].mu, corners[i].sigma, decomp);
  }

  struct Candidate {
    PairMinimax result;
    int first = 0;  // lower curvature
    int second = 0;
  };
  std::array<Candidate, kPairs.size()> candidates;
  std::size_t best = 0;
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    auto [i, j] = kPairs[k];
    if (quads[i].curvature > quads[j].curvature) std::swap(i, j);
    candidates[k] = {pair_minimax(quads[i], quads[j], decomp), i, j};
    const double v = candidates[k].result.value;
    const double incumbent = candidates[best].result.value;
    if (v > incumbent + kCaseTol * std::max(1.0, incumbent)) best = k;
  }

  const Candidate& win = candidates[best];
  HedgeSolution sol;
  sol.method = Method::kCorner;
  sol.pi_star = win.result.pi;
  sol.value = std::max(0.0, win.result.value);
  sol.diagnostics.route = fmt::format("corner-pair ({}, {}) {}", win.first, win.second,
                                      case_name(win.result.pair_case));
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (k == best) continue;
    const PairMinimax& r = candidates[k].result;
    if (std::abs(r.value - sol.value) <= kCaseTol * std::max(1.0, sol.value)) {
      ++sol.diagnostics.ties;
      if (std::abs(r.pi - sol.pi_star) > 1e-9 * std::max(1.0, std::abs(sol.pi_star))) {
        sol.diagnostics.notes.push_back(
            fmt::format("tied pair {} has a distinct minimizer {:.17g}", k, r.pi));
      }
    }
  }

  const CornerQuadratic& a = quads[win.first];
  const CornerQuadratic& c = quads[win.second];
  std::optional<DiscreteMeasure> nu;
  switch (win.result.pair_case) {
    case PairCase::kLowerCurvatureMin:
    case PairCase::kBothFlat:
      nu = DiscreteMeasure({Atom{a.mu, a.sigma, 1.0}}, rect);
      break;
    case PairCase::kHigherCurvatureMin:
      nu = DiscreteMeasure({Atom{c.mu, c.sigma, 1.0}}, rect);
      break;
    default:
      nu = mixing_measure(a, c, sol.pi_star, rect);
      break;
  }
  if (nu) {
    // Accept the reconstruction only if it reproduces the value and pi*.
    const double lin = nu->linear_moment(decomp);
    const double second = nu->second_moment();
    const double inner_pi = second > 0.0 ? lin / second : 0.0;
    const double at_pi = eval_F_measure(sol.pi_star, *nu, decomp);
    const bool ok = std::abs(at_pi - sol.value) <= 1e-9 * (1.0 + sol.value) &&
                    std::abs(inner_pi - sol.pi_star) <= 1e-9 * (1.0 + std::abs(sol.pi_star));
    if (!ok && second > 0.0) {
      sol.diagnostics.notes.push_back("reconstructed measure rejected");
      nu.reset();
    }
  } else {
    sol.diagnostics.notes.push_back("no two-corner weighting reproduces pi*");
  }

  if (nu) {
    const ParamPoint m = nu->mean();
    const bool on_line = win.result.pair_case == PairCase::kOppositeSign;
    sol.witness = {m.mu, m.sigma, on_line ? SideLabel::kInteriorLine : label_for(*nu, rect)};
    sol.worst_measure = std::move(nu);
  } else {
    sol.witness = {a.mu, a.sigma, SideLabel::kPoint};
  }
  if (decomp.residual_variance()) sol.value_total = sol.value + *decomp.residual_variance();
  return sol;
}

}  // namespace robust_hedge
