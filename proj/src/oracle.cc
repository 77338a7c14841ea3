#include "robust_hedge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace robust_hedge::oracle {

namespace {

double envelope(double pi, std::span<const ParamPoint> corners, const ClaimDecomposition& decomp) {
  double best = -std::numeric_limits<double>::infinity();
  for (const ParamPoint& c : corners) best = std::max(best, eval_F(pi, c.mu, c.sigma, decomp));
  return best;
}

double grid_point(double lo, double hi, int i, int n) {
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

CornerMax corner_max(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  CornerMax out{-std::numeric_limits<double>::infinity(), {}};
  for (const ParamPoint& c : rect.corners()) {
    const double v = eval_F(pi, c.mu, c.sigma, decomp);
    if (v > out.value) out = {v, c};
  }
  return out;
}

Minimum exact_piecewise_min(std::span<const ParamPoint> corners,
                            const ClaimDecomposition& decomp) {
  if (corners.empty()) throw InvalidInput("need at least one corner");
  std::vector<double> lin;
  std::vector<double> curv;
  for (const ParamPoint& c : corners) {
    lin.push_back(decomp.h0() * c.mu + decomp.h1() * c.sigma);
    curv.push_back(c.mu * c.mu + c.sigma * c.sigma);
  }
  if (std::all_of(curv.begin(), curv.end(), [](double k) { return k == 0.0; })) {
    return {0.0, decomp.unhedged()};
  }

  std::vector<double> candidates{0.0};
  for (std::size_t i = 0; i < corners.size(); ++i) {
    if (curv[i] > 0.0) candidates.push_back(lin[i] / curv[i]);
  }
  // f_i - f_j = pi ((k_i - k_j) pi - 2 (l_i - l_j)): roots 0 and the ratio below.
  for (std::size_t i = 0; i < corners.size(); ++i) {
    for (std::size_t j = i + 1; j < corners.size(); ++j) {
      if (curv[i] != curv[j]) candidates.push_back(2.0 * (lin[j] - lin[i]) / (curv[j] - curv[i]));
    }
  }

  Minimum best{candidates.front(), envelope(candidates.front(), corners, decomp)};
  for (double p : candidates) {
    const double v = envelope(p, corners, decomp);
    if (v < best.value) best = {p, v};
  }
  return best;
}

Minimum exact_piecewise_min(const UncertaintyRect& rect, const ClaimDecomposition& decomp) {
  const auto corners = rect.corners();
  return exact_piecewise_min(std::span<const ParamPoint>(corners), decomp);
}

double lattice_max(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                   int param_grid) {
  double mu_part = 0.0;
  double sigma_part = 0.0;
  for (int i = 0; i < param_grid; ++i) {
    const double a = decomp.h0() - pi * grid_point(rect.mu_min(), rect.mu_max(), i, param_grid);
    const double b =
        decomp.h1() - pi * grid_point(rect.sigma_min(), rect.sigma_max(), i, param_grid);
    mu_part = std::max(mu_part, a * a);
    sigma_part = std::max(sigma_part, b * b);
  }
  return mu_part + sigma_part;
}

double lattice_max_2d(double pi, const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                      int param_grid) {
  double best = 0.0;
  for (int i = 0; i < param_grid; ++i) {
    const double mu = grid_point(rect.mu_min(), rect.mu_max(), i, param_grid);
    for (int j = 0; j < param_grid; ++j) {
      const double sigma = grid_point(rect.sigma_min(), rect.sigma_max(), j, param_grid);
      best = std::max(best, eval_F(pi, mu, sigma, decomp));
    }
  }
  return best;
}

BruteForceResult brute_force_minimax(const UncertaintyRect& rect, const ClaimDecomposition& decomp,
                                     int pi_grid, int param_grid) {
  if (pi_grid < 3 || param_grid < 3) throw InvalidInput("brute-force grids need at least 3 points");

  BruteForceResult out;
  double k_max = 0.0;
  for (const ParamPoint& c : rect.corners()) k_max = std::max(k_max, c.mu * c.mu + c.sigma * c.sigma);
  if (k_max == 0.0) {
    out.value = decomp.unhedged();
    return out;
  }

  std::vector<double> values(pi_grid);
  const auto scan = [&](double lo, double hi) {
    int best = 0;
    for (int i = 0; i < pi_grid; ++i) {
      const double p = grid_point(lo, hi, i, pi_grid);
      const double lattice = lattice_max(p, rect, decomp, param_grid);
      const double corners = corner_max(p, rect, decomp).value;
      const double excess = lattice - corners;
      out.dominance_excess = std::max(out.dominance_excess, excess);
      if (excess > 1e-12 * std::max(1.0, corners)) {
        throw std::logic_error(fmt::format(
            "lattice value {} exceeds corner maximum {} at pi = {}", lattice, corners, p));
      }
      values[i] = lattice;
      if (lattice < values[best]) best = i;
    }
    return best;
  };

  // |pi*| <= 2 |h0 mu + h1 sigma| / (mu^2 + sigma^2) at the steepest corner.
  double bound = 2.0 * (std::abs(decomp.h0()) + std::abs(decomp.h1()) + 1.0) /
                 std::max(1e-6, std::sqrt(k_max));
  int best = scan(-bound, bound);
  for (int widen = 0; (best == 0 || best == pi_grid - 1) && widen < 60; ++widen) {
    bound *= 2.0;
    best = scan(-bound, bound);
  }
  const double step = 2.0 * bound / (pi_grid - 1);
  const double center = grid_point(-bound, bound, best, pi_grid);

  // The envelope is convex, so its minimizer lies within one step of the incumbent.
  const double lo = center - step;
  const double hi = center + step;
  best = scan(lo, hi);
  out.pi = grid_point(lo, hi, best, pi_grid);
  out.value = values[best];
  out.bracket = step;
  out.resolution = (hi - lo) / (pi_grid - 1);
  for (int i = 0; i + 1 < pi_grid; ++i) {
    out.slope = std::max(out.slope, std::abs(values[i + 1] - values[i]) / out.resolution);
  }
  return out;
}

SaddleReport check_saddle(const HedgeSolution& sol, const UncertaintyRect& rect,
                          const ClaimDecomposition& decomp, int n_samples, std::uint64_t seed,
                          double tolerance) {
  SaddleReport report;
  report.seed = seed;
  report.samples = n_samples;
  report.tolerance = tolerance;
  report.max_upper_violation = -std::numeric_limits<double>::infinity();
  report.max_lower_violation = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mu_dist(rect.mu_min(), rect.mu_max());
  std::uniform_real_distribution<double> sigma_dist(rect.sigma_min(), rect.sigma_max());

  // F(pi*, nu) <= value for every nu; corners are the hardest point masses.
  for (const ParamPoint& c : rect.corners()) {
    report.max_upper_violation =
        std::max(report.max_upper_violation, eval_F(sol.pi_star, c.mu, c.sigma, decomp) - sol.value);
  }
  for (int i = 0; i < n_samples; ++i) {
    const double mu = mu_dist(rng);
    const double sigma = sigma_dist(rng);
    report.max_upper_violation =
        std::max(report.max_upper_violation, eval_F(sol.pi_star, mu, sigma, decomp) - sol.value);
  }

  if (sol.worst_measure) {
    const double spread = 1.0 + std::abs(sol.pi_star);
    std::uniform_real_distribution<double> pi_dist(sol.pi_star - 2.0 * spread,
                                                   sol.pi_star + 2.0 * spread);
    report.max_lower_violation =
        sol.value - eval_F_measure(sol.pi_star, *sol.worst_measure, decomp);
    for (int i = 0; i < n_samples; ++i) {
      const double pi = pi_dist(rng);
      report.max_lower_violation = std::max(
          report.max_lower_violation, sol.value - eval_F_measure(pi, *sol.worst_measure, decomp));
    }
  } else {
    report.partial = true;
  }
  report.pass = report.max_upper_violation <= tolerance &&
                (report.partial || report.max_lower_violation <= tolerance);
  return report;
}

}  // namespace robust_hedge::oracle
