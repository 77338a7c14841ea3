// Projection of a claim H - x0 onto {1, w}: h0 + h1 w + H_perp.
#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <vector>

#include "robust_hedge/model.hpp"

namespace robust_hedge {

/// First and second moments of the claim; w has mean 0 and variance 1.
struct ClaimMoments {
  double mean_H = 0.0;
  double cov_wH = 0.0;
  std::optional<double> var_H;
};

/// eta_1 = beta + delta * w_bar with (w, w_bar) standard bivariate normal,
/// correlation rho.
struct EtaModel {
  double beta = 0.0;
  double delta = 1.0;
  double rho = 0.0;
  std::function<double(double)> claim_fn;
  int quadrature_nodes = 64;
};

struct SamplePair {
  double w_raw = 0.0;
  double H = 0.0;
};

ClaimDecomposition decompose_from_moments(const ClaimMoments& m, double x0);

/// Population moments after standardizing w_raw to mean 0, variance 1.
ClaimDecomposition decompose_from_samples(std::span<const SamplePair> pairs, double x0);

ClaimDecomposition decompose_gaussian_claim(const EtaModel& model, double x0);

/// Nodes and probability weights integrating polynomials of degree < 2n
/// exactly against the standard normal density.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite_rule(int n);

/// Two comma-separated columns (w_raw, H); an optional non-numeric first line
/// is treated as a header. Blank lines are skipped.
std::vector<SamplePair> read_samples_csv(std::istream& in);

}  // namespace robust_hedge
