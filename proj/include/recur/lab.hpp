// Scenario-driven experiment runner.
//
// A scenario is a JSON file naming one registered experiment kind plus its
// parameters (systems, regions, points and polynomials in the grammars of
// their modules).  Reports are deterministic functions of the scenario: the
// seed is fixed in the file (or defaulted and echoed), randomized harnesses
// draw from mt19937_64 through portable reductions, and emitted files are
// bit-identical across runs unless timing output is requested explicitly.

#pragma once

#include "recur/window_set.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace recur {

struct Scenario {
  std::string name;
  std::string experiment;
  u64 seed = 20240601;
  nlohmann::json params;
  std::string output_prefix;  // optional; CLI --out overrides

  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::string& path);
};

struct Verdict {
  enum class Status { Pass, Fail, Ambiguous, Refused };
  std::string check;
  Status status = Status::Pass;
  std::string detail;
};

struct SetTable {
  std::string name;
  WindowSet set;
};

struct Report {
  std::string scenario_name;
  std::string experiment;
  u64 seed = 0;
  nlohmann::json scenario_echo;
  std::vector<Verdict> verdicts;
  std::vector<SetTable> sets;
  std::vector<std::pair<std::string, double>> timings_s;
  i64 ambiguity_total = 0;

  void pass(const std::string& check, const std::string& detail = "");
  void fail(const std::string& check, const std::string& detail = "");
  void refuse(const std::string& check, const std::string& detail = "");
  void require(bool ok, const std::string& check, const std::string& detail = "");
  bool all_pass() const;
  // 0 = pass, 1 = verdict failure or ambiguity, 3 = refused hypothesis
  int exit_code() const;
};

std::vector<std::string> experiment_names();

// Rejects unknown parameter keys and unresolvable declarations (system,
// region, polynomial, scalar and set grammars) without running anything.
void validate_scenario(const Scenario& s);

Report run_experiment(const Scenario& s, int threads = 1);

struct EmitOptions {
  std::string format = "text";  // text | csv | json
  std::string out_prefix;       // empty: text goes to the stream, others error
  bool dump_sets = false;       // raw membership dumps above the inline cap
  bool include_timings = false; // timings break bit-identical output
};

void emit(const Report& report, const EmitOptions& opts, std::ostream& fallback);

}  // namespace recur
