//===- quant.cpp - Scenario probability aggregation -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/quant.hpp"

#include "core/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace fmr {

FailureData FailureData::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("invalid failure data JSON: ") + e.what(), 0,
                     0);
  }
  if (!doc.is_object())
    throw ParseError("failure data must be a JSON object keyed by variable "
                     "name",
                     0, 0);

  FailureData data;
  for (const auto &[var, modes] : doc.items()) {
    if (!modes.is_object())
      throw ParseError("failure data for '" + var +
                           "' must be an object of mode probabilities",
                       0, 0);
    std::map<FailureMode, double> entry;
    double fault_sum = 0;
    for (const auto &[key, value] : modes.items()) {
      if (key == "m")
        throw ParseError("failure data for '" + var +
                             "' must not set \"m\": the match probability "
                             "is derived as the remainder",
                         0, 0);
      auto mode = key.size() == 1 ? mode_from_letter(key[0]) : std::nullopt;
      if (!mode)
        throw ParseError("unknown failure mode \"" + key + "\" for '" + var +
                             "' (expected l, h, f, or t)",
                         0, 0);
      if (!value.is_number())
        throw ParseError("probability of '" + var + "'.\"" + key +
                             "\" must be a number",
                         0, 0);
      double p = value.get<double>();
      if (!(p >= 0.0 && p <= 1.0))
        throw ParseError("probability of '" + var + "'.\"" + key +
                             "\" must be within [0,1]",
                         0, 0);
      entry[*mode] = p;
      fault_sum += p;
    }
    if (fault_sum > 1.0)
      throw ParseError("fault probabilities of '" + var +
                           "' sum beyond 1",
                       0, 0);
    bool has_real = entry.count(FailureMode::Low) ||
                    entry.count(FailureMode::High);
    bool has_bool = entry.count(FailureMode::FalseFault) ||
                    entry.count(FailureMode::TrueFault);
    if (has_real && has_bool)
      throw ParseError("failure data for '" + var +
                           "' mixes real (l/h) and bool (f/t) fault modes",
                       0, 0);
    data.probs_.emplace(var, std::move(entry));
  }
  return data;
}

bool FailureData::has(std::string_view var) const {
  return probs_.find(var) != probs_.end();
}

double FailureData::mode_probability(std::string_view var, SignalType ty,
                                     FailureMode mode) const {
  if (!mode_legal_for(mode, ty))
    throw Error(std::string("mode '") + mode_letter(mode) +
                "' is not legal for " + to_string(ty) + " variable '" +
                std::string(var) + "'");
  auto it = probs_.find(var);
  if (it == probs_.end())
    throw Error("no failure data for variable '" + std::string(var) + "'");
  for (const auto &[m, p] : it->second)
    if (!mode_legal_for(m, ty))
      throw Error(std::string("failure data gives mode '") + mode_letter(m) +
                  "' for " + to_string(ty) + " variable '" + std::string(var) +
                  "'");
  if (mode == FailureMode::Match) {
    double fault_sum = 0;
    for (const auto &[m, p] : it->second)
      fault_sum += p;
    return 1.0 - fault_sum;
  }
  auto mit = it->second.find(mode);
  return mit == it->second.end() ? 0.0 : mit->second;
}

double scenario_probability(const Scenario &scenario, const ProgramGraph &g,
                            const FailureData &data) {
  double p = 1.0;
  for (const ModeLiteral &lit : scenario.literals) {
    const Variable &v = g.variable(lit.var);
    p *= data.mode_probability(v.name, v.type, lit.mode);
  }
  return p;
}

std::string_view to_string(AggregateMethod m) {
  return m == AggregateMethod::RareEvent ? "rare-event" : "inclusion-exclusion";
}

std::optional<AggregateMethod>
aggregate_method_from_string(std::string_view s) {
  if (s == "rare-event" || s == "rare")
    return AggregateMethod::RareEvent;
  if (s == "inclusion-exclusion" || s == "exact")
    return AggregateMethod::InclusionExclusion;
  return std::nullopt;
}

AggregateResult aggregate(const ScenarioFormula &formula,
                          const ProgramGraph &g, const FailureData &data,
                          AggregateMethod method) {
  AggregateResult out;
  out.method = method;
  for (const Scenario &sc : formula.scenarios)
    out.per_scenario.push_back(scenario_probability(sc, g, data));

  const std::size_t n = formula.scenarios.size();
  if (method == AggregateMethod::RareEvent) {
    double sum = 0;
    for (double p : out.per_scenario)
      sum += p;
    out.probability = std::min(sum, 1.0);
    return out;
  }

  if (n > 20)
    throw Error("inclusion-exclusion is limited to 20 scenarios (got " +
                std::to_string(n) +
                "); use the rare-event approximation instead");

  // P(union) by inclusion-exclusion. A subset's conjunction merges the
  // literal sets; a variable demanded in two different modes makes the
  // joint impossible.
  double total = 0;
  for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
    Scenario joint;
    bool consistent = true;
    int members = 0;
    for (std::size_t i = 0; i < n && consistent; ++i) {
      if (!(mask & (std::size_t(1) << i)))
        continue;
      ++members;
      for (const ModeLiteral &lit : formula.scenarios[i].literals)
        if (!joint.unify(lit)) {
          consistent = false;
          break;
        }
    }
    if (!consistent)
      continue;
    double p = scenario_probability(joint, g, data);
    total += (members % 2 == 1) ? p : -p;
  }
  out.probability = std::clamp(total, 0.0, 1.0);
  return out;
}

} // namespace fmr
