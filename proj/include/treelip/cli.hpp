#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "treelip/spec_io.hpp"

namespace treelip::cli {

inline constexpr const char* kReportSchema = "treelip.report/1";
inline constexpr const char* kBudgetsEnv = "TREELIP_DEFAULT_BUDGETS";

enum ExitStatus : int {
  kOk = 0,
  kFailure = 1,
  kSpecInvalid = 2,
  kBudgetExhausted = 3,
  kPreconditionUnmet = 4,
  kTheoremViolated = 5,
};

struct Budgets {
  std::optional<std::size_t> depth = std::nullopt;
  std::optional<std::size_t> horizon = std::nullopt;
  std::optional<double> tolerance = std::nullopt;
  std::optional<std::size_t> max_power = std::nullopt;
  std::optional<std::size_t> sample_levels = std::nullopt;
  std::optional<std::size_t> witness_radius = std::nullopt;
};

// One invocation. After normalize() every budget the command reads is set,
// the tree/map/function documents are canonical, and the spec reproduces
// the same report when fed back through --spec.
struct RunSpec {
  std::string command;  // "tree show", "norm", "bounded", "opnorm", "spectrum probe", ...
  std::optional<json> tree;
  std::optional<json> map;
  std::vector<json> functions;
  Budgets budgets;
  json params = json::object();  // lambda, w, mode, vertex, steps, epsilon, probe_depth, check_depth
  std::string format = "json";
};

const std::vector<std::string>& commands();

json to_json(const RunSpec& spec);
// Rejects unknown fields with SpecError.
RunSpec run_spec_from_json(const json& j);

// "depth=16,horizon=64" as found in TREELIP_DEFAULT_BUDGETS.
Budgets parse_budget_list(std::string_view text);

// Fills command defaults (then `env_defaults` over them, then the explicit
// fields over both), infers the tree from the map and canonicalizes specs.
RunSpec normalize(RunSpec spec, const Budgets& env_defaults = {});

// The report document for a normalized spec.
json execute(const RunSpec& spec);

// Flat CSV projection of the report's numeric tables.
std::string to_csv(const json& report);

// argv without the program name. Writes the report to `out` and a JSON
// error document to `err`; returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treelip::cli
