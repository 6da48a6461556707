//===- report.hpp - JSON and text rendering of results --------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Renders analysis results, conformance reports, and probability
// aggregates as JSON objects (stable key order) and as human-readable
// text. The JSON side uses nlohmann::ordered_json so byte-identical reruns
// produce byte-identical reports.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_REPORT_HPP
#define FMR_CORE_REPORT_HPP

#include "core/engine.hpp"
#include "core/oracle.hpp"
#include "core/program.hpp"
#include "core/quant.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fmr {

using Json = nlohmann::ordered_json;

/// "i1=l"
std::string render_literal(const ProgramGraph &g, const ModeLiteral &lit);
/// "{i1=l & i2=h}"; the empty scenario renders "{}".
std::string render_scenario(const ProgramGraph &g, const Scenario &scenario);

Json scenario_json(const ProgramGraph &g, const Scenario &scenario);

/// Everything the analysis produced: target, options, shortlist, notes,
/// stats, optional aggregate, optional per-scenario derivations.
Json analysis_json(const ProgramGraph &g, const ScenarioFormula &formula,
                   const AnalysisOptions &opts,
                   const AggregateResult *quant = nullptr);
std::string analysis_text(const ProgramGraph &g,
                          const ScenarioFormula &formula,
                          const AnalysisOptions &opts,
                          const AggregateResult *quant = nullptr);

Json conformance_json(const ConformanceReport &report);
std::string conformance_text(const BlockType &type,
                             const ConformanceReport &report);

} // namespace fmr

#endif // FMR_CORE_REPORT_HPP
