#include "robust_hedge/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace robust_hedge {

namespace {

void require_finite(double v, std::string_view what) {
  if (!std::isfinite(v)) {
    throw InvalidInput(fmt::format("{} must be finite, got {}", what, v));
  }
}

}  // namespace

UncertaintyRect::UncertaintyRect(double mu_min, double mu_max, double sigma_min, double sigma_max)
    : mu_min_(mu_min), mu_max_(mu_max), sigma_min_(sigma_min), sigma_max_(sigma_max) {
  require_finite(mu_min, "mu_min");
  require_finite(mu_max, "mu_max");
  require_finite(sigma_min, "sigma_min");
  require_finite(sigma_max, "sigma_max");
  if (mu_min > mu_max) {
    throw InvalidInput(fmt::format("mu_min ({}) exceeds mu_max ({})", mu_min, mu_max));
  }
  if (sigma_min > sigma_max) {
    throw InvalidInput(fmt::format("sigma_min ({}) exceeds sigma_max ({})", sigma_min, sigma_max));
  }
}

bool UncertaintyRect::appendix_regular() const {
  return 0.0 < mu_min_ && mu_min_ < mu_max_ && 0.0 < sigma_min_ && sigma_min_ < sigma_max_;
}

bool UncertaintyRect::contains(double mu, double sigma, double rel_tol) const {
  const double slack = rel_tol * scale();
  return mu >= mu_min_ - slack && mu <= mu_max_ + slack && sigma >= sigma_min_ - slack &&
         sigma <= sigma_max_ + slack;
}

std::array<ParamPoint, 4> UncertaintyRect::corners() const {
  return {ParamPoint{mu_min_, sigma_min_}, ParamPoint{mu_min_, sigma_max_},
          ParamPoint{mu_max_, sigma_min_}, ParamPoint{mu_max_, sigma_max_}};
}

double UncertaintyRect::scale() const {
  return std::max({1.0, std::abs(mu_min_), std::abs(mu_max_), std::abs(sigma_min_),
                   std::abs(sigma_max_)});
}

ClaimDecomposition::ClaimDecomposition(double h0, double h1,
                                       std::optional<double> residual_variance)
    : h0_(h0), h1_(h1), residual_variance_(residual_variance) {
  require_finite(h0, "h0");
  require_finite(h1, "h1");
  if (residual_variance_) {
    require_finite(*residual_variance_, "residual_variance");
    if (*residual_variance_ < 0.0) {
      throw InvalidInput(
          fmt::format("residual_variance must be nonnegative, got {}", *residual_variance_));
    }
  }
}

ClaimDecomposition ClaimDecomposition::scaled(double c) const {
  std::optional<double> residual;
  if (residual_variance_) residual = c * c * *residual_variance_;
  return ClaimDecomposition(c * h0_, c * h1_, residual);
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidInput("a measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    require_finite(a.mu, "atom mu");
    require_finite(a.sigma, "atom sigma");
    require_finite(a.weight, "atom weight");
    if (a.weight < 0.0 || a.weight > 1.0 + 1e-9) {
      throw InvalidInput(fmt::format("atom weight {} outside [0,1]", a.weight));
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput(fmt::format("atom weights sum to {}, expected 1", total));
  }
  for (Atom& a : atoms_) a.weight = std::min(1.0, a.weight / total);
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, const UncertaintyRect& rect)
    : DiscreteMeasure(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!rect.contains(a.mu, a.sigma)) {
      throw InvalidInput(fmt::format("atom ({}, {}) lies outside the rectangle", a.mu, a.sigma));
    }
  }
}

DiscreteMeasure DiscreteMeasure::point_mass(double mu, double sigma) {
  return DiscreteMeasure({Atom{mu, sigma, 1.0}});
}

ParamPoint DiscreteMeasure::mean() const {
  ParamPoint m;
  for (const Atom& a : atoms_) {
    m.mu += a.weight * a.mu;
    m.sigma += a.weight * a.sigma;
  }
  return m;
}

double DiscreteMeasure::second_moment() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight * (a.mu * a.mu + a.sigma * a.sigma);
  return s;
}

double DiscreteMeasure::linear_moment(const ClaimDecomposition& decomp) const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight * (decomp.h0() * a.mu + decomp.h1() * a.sigma);
  return s;
}

std::string_view to_string(SideLabel label) {
  switch (label) {
    case SideLabel::kInteriorLine: return "interior-line";
    case SideLabel::kMinusMinus: return "--";
    case SideLabel::kMinusPlus: return "-+";
    case SideLabel::kPlusMinus: return "+-";
    case SideLabel::kPlusPlus: return "++";
    case SideLabel::kPoint: return "point";
  }
  return "point";
}

SideLabel side_label_from_string(std::string_view text) {
  for (SideLabel l : {SideLabel::kInteriorLine, SideLabel::kMinusMinus, SideLabel::kMinusPlus,
                      SideLabel::kPlusMinus, SideLabel::kPlusPlus, SideLabel::kPoint}) {
    if (to_string(l) == text) return l;
  }
  throw InvalidInput(fmt::format("unknown side label '{}'", text));
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kSaddle: return "saddle";
    case Method::kCorner: return "corner";
    case Method::kOracle: return "oracle";
  }
  return "saddle";
}

Method method_from_string(std::string_view text) {
  for (Method m : {Method::kSaddle, Method::kCorner, Method::kOracle}) {
    if (to_string(m) == text) return m;
  }
  throw InvalidInput(fmt::format("unknown method '{}'", text));
}

double eval_F(double pi, double mu, double sigma, const ClaimDecomposition& decomp) {
  const double a = decomp.h0() - pi * mu;
  const double b = decomp.h1() - pi * sigma;
  return a * a + b * b;
}

double eval_F_measure(double pi, const DiscreteMeasure& nu, const ClaimDecomposition& decomp) {
  double total = 0.0;
  for (const Atom& a : nu.atoms()) total += a.weight * eval_F(pi, a.mu, a.sigma, decomp);
  return total;
}

}  // namespace robust_hedge
