#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qplab {

struct Check {
  std::string name;
  double lhs = 0;
  std::string relation;  // "<=", "=", ">="
  double rhs = 0;
  bool holds = false;
};

/// One command's result. Serialises with sorted keys so identical inputs
/// give byte-identical documents.
struct ReportDocument {
  std::string command;
  nlohmann::json group = nullptr;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  std::int64_t timing_ms = 0;

  void check(std::string name, double lhs, std::string relation, double rhs, bool holds);
  /// holds derived from the relation with an absolute tolerance.
  void check(std::string name, double lhs, std::string relation, double rhs);
  bool all_hold() const;
  nlohmann::json to_json() const;
};

enum class RunStatus { ok = 0, check_failed = 1 };

struct RunOutcome {
  RunStatus status = RunStatus::ok;
  nlohmann::json report;  // single report, or array for the `report` command
  std::string text;       // rendered in the requested format
  std::string summary;    // optional one-line human summary
};

/// Executes one request:
///   {"command": "delta", "group": "g.cay", "options": {...},
///    "seed": 3405691582, "threads": 1, "format": "json", "cache_dir": "...", "timing": false}
/// Throws qplab::Error on usage or input errors.
RunOutcome run_request(const nlohmann::json& request);

/// CSV projection: one row per report, columns command, group, n, then
/// <check>.lhs/.rhs/.holds in first-seen order. Throws on mixed commands.
std::string emit_table(const std::vector<nlohmann::json>& reports);

}  // namespace qplab
