#include "robust_hedge/decompose.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace robust_hedge {

ClaimDecomposition decompose_from_moments(const ClaimMoments& m, double x0) {
  std::optional<double> residual;
  if (m.var_H) {
    const double r = *m.var_H - m.cov_wH * m.cov_wH;
    // Cauchy-Schwarz for unit-variance w; allow rounding-level slack.
    if (r < -1e-12 * std::max(1.0, *m.var_H)) {
      throw InvalidInput(fmt::format("inconsistent moments: var_H = {} < cov_wH^2 = {}", *m.var_H,
                                     m.cov_wH * m.cov_wH));
    }
    residual = std::max(0.0, r);
  }
  return ClaimDecomposition(m.mean_H - x0, m.cov_wH, residual);
}

ClaimDecomposition decompose_from_samples(std::span<const SamplePair> pairs, double x0) {
  if (pairs.size() < 2) {
    throw InvalidInput(fmt::format("need at least 2 samples, got {}", pairs.size()));
  }
  const double n = static_cast<double>(pairs.size());
  double mean_w = 0.0;
  double mean_h = 0.0;
  for (const SamplePair& p : pairs) {
    mean_w += p.w_raw;
    mean_h += p.H;
  }
  mean_w /= n;
  mean_h /= n;

  double var_w = 0.0;
  double var_h = 0.0;
  double cov = 0.0;
  for (const SamplePair& p : pairs) {
    const double dw = p.w_raw - mean_w;
    const double dh = p.H - mean_h;
    var_w += dw * dw;
    var_h += dh * dh;
    cov += dw * dh;
  }
  var_w /= n;
  var_h /= n;
  cov /= n;
  if (!(var_w > 0.0) || !std::isfinite(var_w)) {
    throw InvalidInput("w column has zero variance and cannot be standardized");
  }
  const double h1 = cov / std::sqrt(var_w);
  return ClaimDecomposition(mean_h - x0, h1, std::max(0.0, var_h - h1 * h1));
}

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1) throw InvalidInput("quadrature needs at least one node");
  // Golub-Welsch: probabilists' Hermite recurrence He_{k+1} = x He_k - k He_{k-1}.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Gauss-Hermite eigen decomposition failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = v * v;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  // Symmetrize; the exact rule is symmetric about 0.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

ClaimDecomposition decompose_gaussian_claim(const EtaModel& model, double x0) {
  if (!model.claim_fn) throw InvalidInput("claim function is empty");
  if (std::abs(model.rho) > 1.0) {
    throw InvalidInput(fmt::format("correlation {} outside [-1, 1]", model.rho));
  }
  if (model.quadrature_nodes < 8) {
    throw InvalidInput(fmt::format("quadrature_nodes must be >= 8, got {}", model.quadrature_nodes));
  }
  const QuadratureRule rule = gauss_hermite_rule(model.quadrature_nodes);
  double mean = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = rule.nodes[i];
    const double h = model.claim_fn(model.beta + model.delta * z);
    mean += rule.weights[i] * h;
    first += rule.weights[i] * z * h;
    second += rule.weights[i] * h * h;
  }
  if (!std::isfinite(mean) || !std::isfinite(first) || !std::isfinite(second)) {
    throw InvalidInput("claim function produced non-finite quadrature values");
  }
  // E[w H(eta)] = rho E[w_bar H(eta)] since w = rho w_bar + sqrt(1-rho^2) z, z independent.
  const double h1 = model.rho * first;
  const double variance = std::max(0.0, second - mean * mean);
  return ClaimDecomposition(mean - x0, h1, std::max(0.0, variance - h1 * h1));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<SamplePair> read_samples_csv(std::istream& in) {
  std::vector<SamplePair> out;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw InvalidInput(fmt::format("line {}: expected two comma-separated columns", line_no));
    }
    const auto w = parse_number(view.substr(0, comma));
    const auto h = parse_number(view.substr(comma + 1));
    if (!w || !h) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw InvalidInput(fmt::format("line {}: could not parse numbers", line_no));
    }
    first_content = false;
    out.push_back({*w, *h});
  }
  return out;
}

}  // namespace robust_hedge
