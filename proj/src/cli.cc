#include "robust_hedge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "robust_hedge/corner_solver.hpp"
#include "robust_hedge/decompose.hpp"
#include "robust_hedge/io.hpp"
#include "robust_hedge/oracle.hpp"
#include "robust_hedge/saddle_solver.hpp"

namespace robust_hedge::cli {

namespace {

using nlohmann::json;

void emit(const json& doc, const std::filesystem::path& output, std::ostream& out) {
  if (output.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    io::write_json(output, doc);
  }
}

// Maps library exceptions to exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const NotAppendixRegular& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kPreconditionError;
  } catch (const PreconditionError& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kPreconditionError;
  } catch (const InvalidInput& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kInputError;
  }
}

double relative_gap(double a, double b) {
  const double gap = std::abs(a - b);
  if (gap <= 1e-15) return 0.0;
  return gap / std::max(std::abs(a), std::abs(b));
}

struct Check {
  std::string name;
  double quantity = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

}  // namespace

int run_solve(const std::filesystem::path& input, std::string_view method,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (method != "saddle" && method != "corner" && method != "both") {
      throw InvalidInput(fmt::format("unknown method '{}'", method));
    }
    const io::Instance inst = io::read_instance(input);
    if (method == "corner") {
      emit(io::to_json(solve_corners(inst.rect, inst.decomp)), output, out);
      return int{kOk};
    }
    const HedgeSolution saddle = solve_saddle(inst.rect, inst.decomp);
    if (method == "saddle") {
      emit(io::to_json(saddle), output, out);
      return int{kOk};
    }
    const HedgeSolution corner = solve_corners(inst.rect, inst.decomp);
    json doc = io::to_json(saddle);
    doc["alternate"] = io::to_json(corner);
    const double rel = relative_gap(saddle.value, corner.value);
    doc["discrepancy"] = {{"value_abs", std::abs(saddle.value - corner.value)},
                          {"value_rel", rel},
                          {"pi_abs", std::abs(saddle.pi_star - corner.pi_star)}};
    emit(doc, output, out);
    if (rel > 1e-6) {
      fmt::print(err, "methods disagree: relative value discrepancy {:.3e}\n", rel);
      return int{kVerificationFailed};
    }
    return int{kOk};
  });
}

int run_verify(const std::filesystem::path& input, int grid, int samples, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (grid < 3) throw InvalidInput("--grid must be at least 3");
    if (samples < 1) throw InvalidInput("--samples must be positive");
    const io::Instance inst = io::read_instance(input);
    const UncertaintyRect& rect = inst.rect;
    const ClaimDecomposition& decomp = inst.decomp;

    std::vector<Check> checks;
    const oracle::Minimum exact = oracle::exact_piecewise_min(rect, decomp);
    const double value_tol = 1e-9 * (1.0 + exact.value);

    const HedgeSolution corner = solve_corners(rect, decomp);
    checks.push_back({"corner value vs exact", std::abs(corner.value - exact.value), value_tol,
                      std::abs(corner.value - exact.value) <= value_tol, ""});

    std::optional<HedgeSolution> saddle;
    if (rect.appendix_regular()) {
      saddle = solve_saddle(rect, decomp);
      const double gap = std::abs(saddle->value - exact.value);
      checks.push_back({"saddle value vs exact", gap, value_tol, gap <= value_tol, ""});
      const double pi_gap = std::abs(saddle->pi_star - corner.pi_star);
      const double pi_tol = 1e-8 * (1.0 + std::abs(corner.pi_star));
      const bool tied = corner.diagnostics.ties > 0 || saddle->diagnostics.ties > 0;
      const bool waived = tied && pi_gap > pi_tol;
      checks.push_back({"saddle pi vs corner pi", pi_gap, pi_tol, waived || pi_gap <= pi_tol,
                        waived ? "waived: tie set" : ""});
    } else {
      fmt::print(out, "saddle route skipped: rectangle is not appendix-regular\n");
    }

    const oracle::BruteForceResult brute = oracle::brute_force_minimax(rect, decomp, grid, grid);
    const double brute_gap = brute.value - exact.value;
    const double brute_tol = brute.resolution * std::max(1.0, brute.slope) + 1e-10;
    checks.push_back({"brute force vs exact", brute_gap, brute_tol,
                      brute_gap >= -value_tol && brute_gap <= brute_tol, ""});

    const auto saddle_check = [&](const HedgeSolution& sol, std::string_view name) {
      const oracle::SaddleReport r = oracle::check_saddle(sol, rect, decomp, samples, seed);
      const double worst = r.partial ? r.max_upper_violation
                                     : std::max(r.max_upper_violation, r.max_lower_violation);
      checks.push_back({fmt::format("saddle inequalities ({})", name), worst, r.tolerance, r.pass,
                        r.partial ? "partial: no worst measure" : ""});
    };
    saddle_check(corner, "corner");
    if (saddle) saddle_check(*saddle, "saddle");

    fmt::print(out, "pi* = {:.17g}  value = {:.17g}  (exact oracle: pi = {:.17g}, value = {:.17g})\n",
               corner.pi_star, corner.value, exact.pi, exact.value);
    fmt::print(out, "seed = {}\n", seed);
    fmt::print(out, "{:<32} {:>14} {:>12}  {}\n", "check", "quantity", "tolerance", "result");
    bool all = true;
    for (const Check& c : checks) {
      all = all && c.pass;
      fmt::print(out, "{:<32} {:>14.6e} {:>12.3e}  {}{}\n", c.name, c.quantity, c.tolerance,
                 c.pass ? "PASS" : "FAIL", c.note.empty() ? "" : "  (" + c.note + ")");
    }
    if (!all) {
      for (const Check& c : checks) {
        if (!c.pass) fmt::print(err, "failed: {} = {:.17g}\n", c.name, c.quantity);
      }
      return int{kVerificationFailed};
    }
    return int{kOk};
  });
}

int run_sweep_x0(const std::filesystem::path& input, double x0_min, double x0_max, int steps,
                 const std::filesystem::path& csv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(x0_min < x0_max)) {
      throw InvalidInput(fmt::format("x0 range [{}, {}] is empty or inverted", x0_min, x0_max));
    }
    if (steps < 2) throw InvalidInput("--steps must be at least 2");
    const io::Instance inst = io::read_instance(input);
    if (!inst.moments) throw InvalidInput("sweep-x0 needs a claim given as moments");

    std::ofstream file;
    if (!csv.empty()) {
      file.open(csv);
      if (!file) throw InvalidInput(fmt::format("cannot write '{}'", csv.string()));
    }
    std::ostream& sink = csv.empty() ? out : file;
    const auto row = [&](double x0, const HedgeSolution& sol, std::string_view kind) {
      fmt::print(sink, "{},{},{},{},{}\n", io::format_number(x0), io::format_number(sol.pi_star),
                 io::format_number(sol.value),
                 sol.value_total ? io::format_number(*sol.value_total) : "", kind);
    };
    fmt::print(sink, "x0,pi_star,value,value_total,kind\n");
    for (int i = 0; i < steps; ++i) {
      const double x0 =
          i == steps - 1 ? x0_max : x0_min + (x0_max - x0_min) * i / static_cast<double>(steps - 1);
      row(x0, solve_auto(inst.rect, decompose_from_moments(*inst.moments, x0)), "scan");
    }
    const CapitalOptimum best = optimize_initial_capital(inst.rect, *inst.moments);
    row(best.x0_star, best.solution, "optimum");
    return int{kOk};
  });
}

int run_decompose(const std::filesystem::path& samples, double x0,
                  const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(samples);
    if (!in) throw InvalidInput(fmt::format("cannot open '{}'", samples.string()));
    const std::vector<SamplePair> pairs = read_samples_csv(in);
    emit(io::to_json(decompose_from_samples(pairs, x0)), output, out);
    return int{kOk};
  });
}

int run_main(int argc, char** argv) {
  CLI::App app{"Robust single-period mean-variance hedging under drift/volatility uncertainty"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string method = "both";
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("--input", input, "Instance JSON")->required();
  solve->add_option("--method", method, "saddle | corner | both")
      ->check(CLI::IsMember({"saddle", "corner", "both"}));
  solve->add_option("--output", output, "Result JSON (stdout if omitted)");

  int grid = 201;
  int samples = 100;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Cross-check both solvers against the oracle");
  verify->add_option("--input", input, "Instance JSON")->required();
  verify->add_option("--grid", grid, "Brute-force grid size");
  verify->add_option("--samples", samples, "Saddle-inequality samples");
  verify->add_option("--seed", seed, "Random seed");

  double x0_min = 0.0;
  double x0_max = 0.0;
  int steps = 0;
  std::string csv;
  auto* sweep = app.add_subcommand("sweep-x0", "Value as a function of initial capital");
  sweep->add_option("--input", input, "Instance JSON with claim moments")->required();
  sweep->add_option("--min", x0_min, "Lowest x0")->required();
  sweep->add_option("--max", x0_max, "Highest x0")->required();
  sweep->add_option("--steps", steps, "Number of scan points")->required();
  sweep->add_option("--csv", csv, "CSV output (stdout if omitted)");

  std::string samples_path;
  double x0 = 0.0;
  auto* decompose = app.add_subcommand("decompose", "Claim decomposition from (w, H) samples");
  decompose->add_option("--samples", samples_path, "Two-column CSV")->required();
  decompose->add_option("--x0", x0, "Initial capital")->required();
  decompose->add_option("--output", output, "Result JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? int{kOk} : int{kInputError};
  }

  if (*solve) return run_solve(input, method, output, std::cout, std::cerr);
  if (*verify) return run_verify(input, grid, samples, seed, std::cout, std::cerr);
  if (*sweep) return run_sweep_x0(input, x0_min, x0_max, steps, csv, std::cout, std::cerr);
  return run_decompose(samples_path, x0, output, std::cout, std::cerr);
}

}  // namespace robust_hedge::cli
