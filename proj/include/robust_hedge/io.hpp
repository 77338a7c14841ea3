// JSON instance and result documents.
//
// Instance:
//   {"rect": {"mu_min", "mu_max", "sigma_min", "sigma_max"},
//    "claim": {"h0", "h1", "residual_variance"?}
//           | {"moments": {"mean_H", "cov_wH", "var_H"?}, "x0"}}
//
// Result:
//   {"pi_star", "value", "value_total"?, "worst_measure": [{"mu","sigma","weight"}],
//    "witness": {"x", "y", "side"}, "method", "diagnostics"}
#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "robust_hedge/decompose.hpp"
#include "robust_hedge/model.hpp"

namespace robust_hedge::io {

struct Instance {
  UncertaintyRect rect;
  ClaimDecomposition decomp;
  /// Present when the claim was given as moments.
  std::optional<ClaimMoments> moments;
  std::optional<double> x0;
};

/// Throws InvalidInput on any schema violation.
Instance parse_instance(const nlohmann::json& doc);
Instance read_instance(const std::filesystem::path& path);

nlohmann::json to_json(const HedgeSolution& sol);
HedgeSolution solution_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ClaimDecomposition& decomp);
ClaimDecomposition decomposition_from_json(const nlohmann::json& doc);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// %.17g, the CSV number format.
std::string format_number(double v);

}  // namespace robust_hedge::io
