//===- quant.hpp - Scenario probability aggregation -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Turns a scenario shortlist into a probability. Input variables fail
// independently; each variable has a probability per fault mode and the
// match mode carries the remainder. A scenario's probability is the product
// over its literals; the shortlist aggregates either exactly by
// inclusion-exclusion or with the rare-event approximation (plain sum,
// clamped to 1).
//
// Failure data is a JSON object keyed by input variable name:
//
//   { "i1": { "l": 1e-3, "h": 2e-4 }, "ok": { "f": 1e-5 } }
//
// Fault modes left out have probability zero; "m" is always derived, never
// given. A variable a scenario mentions must appear in the data.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_QUANT_HPP
#define FMR_CORE_QUANT_HPP

#include "core/engine.hpp"
#include "core/program.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fmr {

/// Per-variable fault mode probabilities.
class FailureData {
public:
  /// Parses and validates the JSON document. Throws ParseError on
  /// malformed input, probabilities outside [0,1], an explicit "m" entry,
  /// or a variable whose fault probabilities sum beyond 1.
  static FailureData parse(std::string_view json_text);

  bool has(std::string_view var) const;

  /// P(var fails with `mode`); Match returns one minus the fault sum.
  /// Throws Error if the variable is absent or the mode is not legal for
  /// `ty`.
  double mode_probability(std::string_view var, SignalType ty,
                          FailureMode mode) const;

  const std::map<std::string, std::map<FailureMode, double>, std::less<>> &
  entries() const {
    return probs_;
  }

private:
  std::map<std::string, std::map<FailureMode, double>, std::less<>> probs_;
};

/// Product over the scenario's literals under independence. The empty
/// scenario has probability 1.
double scenario_probability(const Scenario &scenario, const ProgramGraph &g,
                            const FailureData &data);

enum class AggregateMethod : std::uint8_t {
  RareEvent,          // sum of scenario probabilities, clamped to 1
  InclusionExclusion, // exact P(union) over up to 20 scenarios
};

std::string_view to_string(AggregateMethod m);
std::optional<AggregateMethod> aggregate_method_from_string(std::string_view s);

struct AggregateResult {
  AggregateMethod method = AggregateMethod::RareEvent;
  double probability = 0.0;
  /// Parallel to the formula's scenarios.
  std::vector<double> per_scenario;
};

/// Aggregates the shortlist probability. InclusionExclusion enumerates
/// scenario subsets and is limited to 20 scenarios; beyond that it throws
/// with a hint to use the rare-event approximation. Conjunctions with
/// conflicting modes on one variable contribute zero.
AggregateResult aggregate(const ScenarioFormula &formula,
                          const ProgramGraph &g, const FailureData &data,
                          AggregateMethod method);

} // namespace fmr

#endif // FMR_CORE_QUANT_HPP
