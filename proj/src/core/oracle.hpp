//===- oracle.hpp - Concrete-execution ground truth -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Everything here works on concrete values and never consults the backward
// engine, so it can serve as independent ground truth for it:
//
//   * WitnessGrid - finite real sample set from which (reported, actual)
//     pairs are drawn. Samples cluster around every comparator threshold,
//     so each branch of each block is exercised; a densified grid must
//     reproduce all verdicts (sampling adequacy check).
//   * verify_fmb - checks a block's mode table against exhaustive
//     simulation over the grid: sound (every table row has a concrete
//     witness) and complete (every observation is covered by a row).
//   * brute_force_program - classifies the target output mode for every
//     combination of concrete input pairs, aggregated per input-mode
//     tuple. The set of tuples that can produce a target mode is the
//     reference the backward analysis is compared against.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_ORACLE_HPP
#define FMR_CORE_ORACLE_HPP

#include "core/engine.hpp"
#include "core/program.hpp"

#include <optional>
#include <set>
#include <span>
#include <vector>

namespace fmr {

/// Real sample values used to build concrete witnesses. Booleans always
/// sample {false, true} and need no grid.
struct WitnessGrid {
  std::vector<double> reals; // sorted, unique, finite
  double delta = 0.5;

  /// Base samples plus {K-2d, K-d, K, K+d, K+2d} per threshold; closed
  /// under negation when `with_abs` so magnitude comparisons under Abs are
  /// exercised on both sides of zero.
  static WitnessGrid for_thresholds(std::span<const double> thresholds,
                                    bool with_abs, double delta);
  static WitnessGrid for_block(const BlockType &type,
                               std::optional<double> threshold, double delta);
  static WitnessGrid for_program(const ProgramGraph &g, double delta);

  /// Midpoints of adjacent samples inserted; used by the stability check.
  WitnessGrid densified() const;

  /// All (reported, actual) pairs of one signal type drawn from the grid.
  std::vector<FailureState> pairs(SignalType ty) const;
};

/// Computes every variable's value from the input values. `values` must
/// have one entry per program variable with the Input slots filled; other
/// slots are overwritten in dependency order. Throws Error if a block kind
/// has no concrete semantics.
void run_program(const ProgramGraph &g, const Catalog &catalog,
                 std::vector<Value> &values);

/// One observed (input modes -> output modes) line of a block table.
struct ObservedRow {
  ModeTuple inputs;
  ModeSet outputs;
};

struct ConformanceViolation {
  enum class Kind : std::uint8_t {
    UnwitnessedRow,       // table row never observed: unsound
    UncoveredObservation, // observed behavior missing from table: incomplete
  };
  Kind kind;
  ModeTuple inputs;
  FailureMode output = FailureMode::Match;
  /// UncoveredObservation only: concrete input pairs demonstrating it.
  std::vector<FailureState> witness;
};

struct ConformanceReport {
  std::string kind;
  bool sound = false;
  bool complete = false;
  /// Observed table, one entry per input-mode tuple in canonical order.
  std::vector<ObservedRow> observed;
  std::vector<ConformanceViolation> violations;
  /// True iff the observed table and the declared table list exactly the
  /// same (inputs -> output) transitions, uncertain rows included.
  bool matches_rows = false;
};

/// Verifies the block's own table against exhaustive simulation on the
/// grid. `threshold` is used by comparator kinds and ignored otherwise.
/// Requires concrete semantics and full tuple coverage by the grid; throws
/// Error otherwise.
ConformanceReport verify_fmb(const BlockType &type, const WitnessGrid &grid,
                             double threshold = 1.0);

/// Same check against a caller-supplied table (e.g. a mutated one).
ConformanceReport verify_fmb(const BlockType &type, const Fmb &fmb,
                             const WitnessGrid &grid, double threshold = 1.0);

/// Per input-mode tuple over the target's cone inputs, the set of target
/// failure modes observed by exhaustive simulation of grid value pairs.
struct CausingTuples {
  std::vector<int> inputs; // cone input variable indices, declaration order
  std::vector<ModeSet> table; // indexed by tuple_index()

  std::size_t tuple_count() const { return table.size(); }
  std::size_t tuple_index(std::span<const FailureMode> modes) const;
  std::vector<FailureMode> tuple_at(std::size_t index) const;

  /// Tuples whose observed mode set contains `mode`.
  std::set<std::vector<FailureMode>> causing(FailureMode mode) const;

private:
  friend CausingTuples brute_force_program(const ProgramGraph &,
                                           const Catalog &, int,
                                           const WitnessGrid &);
  std::vector<SignalType> types_; // per cone input
};

/// Exhaustive ground truth for one target variable: simulates every pair
/// of grid-valued input vectors (reported vs actual) through the target's
/// cone. Throws Error beyond 8 cone inputs or if the vector space is too
/// large to enumerate.
CausingTuples brute_force_program(const ProgramGraph &g,
                                  const Catalog &catalog, int target_var,
                                  const WitnessGrid &grid);

/// Expands a scenario formula to total mode tuples over `inputs`.
/// Variables a scenario leaves unmentioned range over all legal modes
/// (AllModes: the unpruned reading) or are fixed to match (MatchOnly: the
/// fault-tree reading of pruned scenarios).
enum class ExpandFill : std::uint8_t { AllModes, MatchOnly };

std::set<std::vector<FailureMode>>
expand_scenarios(const ScenarioFormula &formula, const ProgramGraph &g,
                 std::span<const int> inputs, ExpandFill fill);

} // namespace fmr

#endif // FMR_CORE_ORACLE_HPP
