#include "robust_hedge/io.hpp"

#include <fstream>
#include <string>

#include <fmt/format.h>

namespace robust_hedge::io {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidInput(fmt::format("{}: missing field '{}'", where, key));
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw InvalidInput(fmt::format("{}: field '{}' must be a number", where, key));
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number(obj, key, where);
}

}  // namespace

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("instance must be a JSON object");
  const json& r = require(doc, "rect", "instance");
  UncertaintyRect rect(number(r, "mu_min", "rect"), number(r, "mu_max", "rect"),
                       number(r, "sigma_min", "rect"), number(r, "sigma_max", "rect"));

  const json& claim = require(doc, "claim", "instance");
  if (claim.is_object() && claim.contains("moments")) {
    const json& m = claim.at("moments");
    ClaimMoments moments{number(m, "mean_H", "moments"), number(m, "cov_wH", "moments"),
                         optional_number(m, "var_H", "moments")};
    const double x0 = number(claim, "x0", "claim");
    return Instance{rect, decompose_from_moments(moments, x0), moments, x0};
  }
  ClaimDecomposition decomp(number(claim, "h0", "claim"), number(claim, "h1", "claim"),
                            optional_number(claim, "residual_variance", "claim"));
  return Instance{rect, decomp, std::nullopt, std::nullopt};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

Instance read_instance(const std::filesystem::path& path) { return parse_instance(read_json(path)); }

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  out << doc.dump(2) << '\n';
}

json to_json(const HedgeSolution& sol) {
  json doc;
  doc["pi_star"] = sol.pi_star;
  doc["value"] = sol.value;
  if (sol.value_total) doc["value_total"] = *sol.value_total;
  json atoms = json::array();
  if (sol.worst_measure) {
    for (const Atom& a : sol.worst_measure->atoms()) {
      atoms.push_back({{"mu", a.mu}, {"sigma", a.sigma}, {"weight", a.weight}});
    }
  }
  doc["worst_measure"] = atoms;
  doc["witness"] = {
      {"x", sol.witness.x}, {"y", sol.witness.y}, {"side", std::string(to_string(sol.witness.side))}};
  doc["method"] = std::string(to_string(sol.method));
  json diag;
  diag["route"] = sol.diagnostics.route;
  if (sol.diagnostics.psi_star) diag["psi_star"] = *sol.diagnostics.psi_star;
  if (sol.diagnostics.t_star) diag["t_star"] = *sol.diagnostics.t_star;
  diag["ties"] = sol.diagnostics.ties;
  diag["notes"] = sol.diagnostics.notes;
  doc["diagnostics"] = diag;
  return doc;
}

HedgeSolution solution_from_json(const json& doc) {
  HedgeSolution sol;
  sol.pi_star = number(doc, "pi_star", "result");
  sol.value = number(doc, "value", "result");
  sol.value_total = optional_number(doc, "value_total", "result");
  const json& atoms = require(doc, "worst_measure", "result");
  if (!atoms.is_array()) throw InvalidInput("result: worst_measure must be an array");
  if (!atoms.empty()) {
    std::vector<Atom> parsed;
    for (const json& a : atoms) {
      parsed.push_back({number(a, "mu", "atom"), number(a, "sigma", "atom"),
                        number(a, "weight", "atom")});
    }
    sol.worst_measure = DiscreteMeasure(std::move(parsed));
  }
  const json& w = require(doc, "witness", "result");
  sol.witness = {number(w, "x", "witness"), number(w, "y", "witness"),
                 side_label_from_string(require(w, "side", "witness").get<std::string>())};
  sol.method = method_from_string(require(doc, "method", "result").get<std::string>());
  if (doc.contains("diagnostics")) {
    const json& d = doc.at("diagnostics");
    sol.diagnostics.route = d.value("route", "");
    sol.diagnostics.psi_star = optional_number(d, "psi_star", "diagnostics");
    sol.diagnostics.t_star = optional_number(d, "t_star", "diagnostics");
    sol.diagnostics.ties = d.value("ties", 0);
    if (d.contains("notes")) sol.diagnostics.notes = d.at("notes").get<std::vector<std::string>>();
  }
  return sol;
}

json to_json(const ClaimDecomposition& decomp) {
  json doc{{"h0", decomp.h0()}, {"h1", decomp.h1()}};
  if (decomp.residual_variance()) doc["residual_variance"] = *decomp.residual_variance();
  return doc;
}

ClaimDecomposition decomposition_from_json(const json& doc) {
  return ClaimDecomposition(number(doc, "h0", "decomposition"), number(doc, "h1", "decomposition"),
                            optional_number(doc, "residual_variance", "decomposition"));
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace robust_hedge::io
