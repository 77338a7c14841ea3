// Domain types and the hedging objective shared by every solver.
//
// The hedger holds pi units of an asset whose one-period increment is
// mu + sigma * w with (mu, sigma) chosen by an adversary from a rectangle.
// After projecting the claim onto {1, w} the squared hedging error is
//
//   F(pi, mu, sigma) = (h0 - pi * mu)^2 + (h1 - pi * sigma)^2
//
// plus the variance of the orthogonal residual, which no strategy touches.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robust_hedge {

/// Malformed input: bad rectangle, weights that do not sum to one, etc.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver was called outside the regime its closed form covers.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The randomization route needs 0 < mu_min < mu_max, 0 < sigma_min < sigma_max.
class NotAppendixRegular : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A (drift, volatility) pair.
struct ParamPoint {
  double mu = 0.0;
  double sigma = 0.0;

  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

/// The rectangle [mu_min, mu_max] x [sigma_min, sigma_max] of admissible
/// parameters.
class UncertaintyRect {
 public:
  UncertaintyRect(double mu_min, double mu_max, double sigma_min, double sigma_max);

  double mu_min() const { return mu_min_; }
  double mu_max() const { return mu_max_; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  double mu_mid() const { return 0.5 * (mu_min_ + mu_max_); }
  double sigma_mid() const { return 0.5 * (sigma_min_ + sigma_max_); }
  double mu_width() const { return mu_max_ - mu_min_; }
  double sigma_width() const { return sigma_max_ - sigma_min_; }

  /// Strictly positive lower bounds and strictly positive widths.
  bool appendix_regular() const;

  /// Membership with an absolute slack scaled by the rectangle's magnitude.
  bool contains(double mu, double sigma, double rel_tol = 1e-12) const;

  /// Corners in the fixed order (mu-,sigma-), (mu-,sigma+), (mu+,sigma-), (mu+,sigma+).
  std::array<ParamPoint, 4> corners() const;

  /// Largest absolute coordinate, at least 1.
  double scale() const;

 private:
  double mu_min_;
  double mu_max_;
  double sigma_min_;
  double sigma_max_;
};

/// h0 = E(H - x0), h1 = E(wH), and optionally Var(H_perp).
class ClaimDecomposition {
 public:
  ClaimDecomposition(double h0, double h1, std::optional<double> residual_variance = {});

  double h0() const { return h0_; }
  double h1() const { return h1_; }
  const std::optional<double>& residual_variance() const { return residual_variance_; }

  /// h0^2 + h1^2, the error of doing nothing.
  double unhedged() const { return h0_ * h0_ + h1_ * h1_; }

  ClaimDecomposition scaled(double c) const;

 private:
  double h0_;
  double h1_;
  std::optional<double> residual_variance_;
};

struct Atom {
  double mu = 0.0;
  double sigma = 0.0;
  double weight = 0.0;
};

/// Finitely supported probability measure on parameter pairs.
class DiscreteMeasure {
 public:
  /// Weights must each lie in [0,1] and sum to 1 within 1e-9; they are
  /// renormalized to sum to 1 exactly (up to rounding).
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  /// As above, and additionally every atom must lie in `rect`.
  DiscreteMeasure(std::vector<Atom> atoms, const UncertaintyRect& rect);

  static DiscreteMeasure point_mass(double mu, double sigma);

  const std::vector<Atom>& atoms() const { return atoms_; }

  /// (E mu, E sigma).
  ParamPoint mean() const;

  /// E(mu^2 + sigma^2).
  double second_moment() const;

  /// E(h0 mu + h1 sigma).
  double linear_moment(const ClaimDecomposition& decomp) const;

 private:
  std::vector<Atom> atoms_;
};

enum class SideLabel { kInteriorLine, kMinusMinus, kMinusPlus, kPlusMinus, kPlusPlus, kPoint };

std::string_view to_string(SideLabel label);
SideLabel side_label_from_string(std::string_view text);

enum class Method { kSaddle, kCorner, kOracle };

std::string_view to_string(Method method);
Method method_from_string(std::string_view text);

struct Witness {
  double x = 0.0;
  double y = 0.0;
  SideLabel side = SideLabel::kPoint;
};

/// Free-form solver notes carried alongside a solution.
struct Diagnostics {
  std::string route;
  std::optional<double> psi_star;
  std::optional<double> t_star;
  /// Number of competitors (sides or corner pairs) tied with the winner.
  int ties = 0;
  std::vector<std::string> notes;
};

struct HedgeSolution {
  double pi_star = 0.0;
  double value = 0.0;
  std::optional<double> value_total;
  std::optional<DiscreteMeasure> worst_measure;
  Witness witness;
  Method method = Method::kSaddle;
  Diagnostics diagnostics;
};

/// (h0 - pi mu)^2 + (h1 - pi sigma)^2.
double eval_F(double pi, double mu, double sigma, const ClaimDecomposition& decomp);

/// Expectation of eval_F under `nu`.
double eval_F_measure(double pi, const DiscreteMeasure& nu, const ClaimDecomposition& decomp);

}  // namespace robust_hedge
