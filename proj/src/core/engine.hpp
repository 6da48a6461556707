//===- engine.hpp - Backward failure mode reasoning -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Backward analysis turns "output variable o fails with mode mu" into a
// shortlist of input failure scenarios: a DNF whose conjunctions assign one
// failure mode to some of the program's input variables.
//
// The engine walks the target's cone of blocks in reverse dependency order.
// A scenario is a conjunction of (variable, mode) literals. Processing a
// block replaces the literal on its output variable by each table row that
// can produce that mode, forking the scenario per row. Repeated variables
// (fan-out) unify: a scenario demanding two different modes of one variable
// is contradictory and is dropped. The walk terminates with literals on
// input variables only, then the formula is simplified (deduplication and
// absorption; no wider minimization, so every surviving conjunction is an
// actual derivation).
//
// Options select the table variant (uncertain And/Or rows kept or dropped),
// whether match-mode literals are tracked backwards or pruned, and whether
// per-scenario derivation traces are recorded.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_ENGINE_HPP
#define FMR_CORE_ENGINE_HPP

#include "core/catalog.hpp"
#include "core/program.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fmr {

/// One conjunct: variable `var` fails with mode `mode`.
struct ModeLiteral {
  int var = -1;
  FailureMode mode = FailureMode::Match;

  bool operator==(const ModeLiteral &o) const = default;
  bool operator<(const ModeLiteral &o) const {
    if (var != o.var)
      return var < o.var;
    return mode_rank(mode) < mode_rank(o.mode);
  }
};

/// One derivation step recorded for explain output.
struct ProvenanceStep {
  enum class Kind : std::uint8_t {
    Expand, // block row substituted for the output literal
    Prune,  // match-mode literal dropped instead of tracked
  };
  Kind kind = Kind::Expand;
  int block = -1;          // block index; -1 for the final input-literal strip
  int var = -1;            // the literal's variable
  FailureMode mode = FailureMode::Match;
  ModeTuple row;           // Expand only: the substituted input modes
};

/// Conjunction of mode literals (sorted by variable, no duplicates), with
/// an optional derivation trace.
struct Scenario {
  std::vector<ModeLiteral> literals;
  std::vector<ProvenanceStep> trace;

  /// Adds or unifies a literal. Returns false on a mode conflict (the
  /// scenario is then contradictory).
  bool unify(ModeLiteral lit);
  /// Literal on `var`, or nullptr.
  const ModeLiteral *find(int var) const;
  void erase(int var);
};

/// Scenario ordering and equality ignore traces.
bool scenario_less(const Scenario &a, const Scenario &b);
bool scenario_equal(const Scenario &a, const Scenario &b);

struct AnalysisOptions {
  FmbVariant variant = FmbVariant::Practical;
  bool prune_match = true;
  bool include_uncertain = false; // no-op under the practical variant
  bool with_provenance = false;
  /// Safety valve: abort with an error if the working set ever exceeds
  /// this many scenarios.
  std::size_t max_scenarios = 1000000;
};

struct AnalysisStats {
  std::size_t rows_expanded = 0;
  std::size_t conflicts_dropped = 0;
  std::size_t match_pruned = 0;
};

/// Result DNF: `scenarios` is the simplified shortlist, every literal names
/// an input variable. Empty means the target mode cannot be produced under
/// the chosen options. A scenario with no literals means the target mode
/// needs no input faults at all.
struct ScenarioFormula {
  int target_var = -1;
  FailureMode target_mode = FailureMode::Match;
  std::vector<Scenario> scenarios;
  std::vector<std::string> notes;
  AnalysisStats stats;
};

/// Derives the input failure scenarios for `target_var` failing with
/// `target_mode`. The target must be an Output variable with a mode legal
/// for its type; violations throw Error. An unreachable target yields an
/// empty formula with a note, not an error.
ScenarioFormula backward_analyze(const ProgramGraph &g, const Catalog &catalog,
                                 int target_var, FailureMode target_mode,
                                 const AnalysisOptions &opts);

/// Deduplicates, removes absorbed scenarios (supersets of another scenario)
/// and sorts into canonical order. Preserves the satisfying-assignment set.
void simplify(std::vector<Scenario> &scenarios);

/// True if `a`'s literal set is a subset of `b`'s.
bool scenario_subsumes(const Scenario &a, const Scenario &b);

} // namespace fmr

#endif // FMR_CORE_ENGINE_HPP
