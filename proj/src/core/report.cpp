//===- report.cpp - JSON and text rendering of results --------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/report.hpp"

#include <sstream>

namespace fmr {

namespace {

std::string mode_str(FailureMode m) { return std::string(1, mode_letter(m)); }

Json options_json(const AnalysisOptions &opts) {
  Json j;
  j["variant"] = std::string(to_string(opts.variant));
  j["prune_match"] = opts.prune_match;
  j["include_uncertain"] = opts.include_uncertain;
  return j;
}

Json provenance_json(const ProgramGraph &g, const Scenario &sc) {
  Json steps = Json::array();
  for (const ProvenanceStep &step : sc.trace) {
    Json s;
    if (step.kind == ProvenanceStep::Kind::Prune) {
      s["action"] = "prune";
      if (step.var >= 0)
        s["var"] = g.variable(step.var).name;
      s["mode"] = mode_str(FailureMode::Match);
      if (step.block >= 0)
        s["block"] = g.block(step.block).id;
      steps.push_back(std::move(s));
      continue;
    }
    const BlockInstance &blk = g.block(step.block);
    s["action"] = "expand";
    s["block"] = blk.id;
    s["kind"] = blk.kind;
    s["var"] = g.variable(step.var).name;
    s["mode"] = mode_str(step.mode);
    Json from = Json::array();
    for (std::uint8_t i = 0; i < step.row.size; ++i) {
      Json lit;
      lit["var"] = g.variable(blk.inputs[i]).name;
      lit["mode"] = mode_str(step.row[i]);
      from.push_back(std::move(lit));
    }
    s["from"] = std::move(from);
    steps.push_back(std::move(s));
  }
  return steps;
}

void provenance_text(std::ostream &os, const ProgramGraph &g,
                     const Scenario &sc) {
  for (const ProvenanceStep &step : sc.trace) {
    if (step.kind == ProvenanceStep::Kind::Prune) {
      os << "    pruned";
      if (step.var >= 0)
        os << ' ' << g.variable(step.var).name << "=m";
      if (step.block >= 0)
        os << " at block " << g.block(step.block).id;
      os << " (match mode is not tracked)\n";
      continue;
    }
    const BlockInstance &blk = g.block(step.block);
    os << "    block " << blk.id << " (" << blk.kind << "): "
       << g.variable(step.var).name << '=' << mode_letter(step.mode)
       << " <=";
    for (std::uint8_t i = 0; i < step.row.size; ++i)
      os << (i ? " & " : " ") << g.variable(blk.inputs[i]).name << '='
         << mode_letter(step.row[i]);
    os << '\n';
  }
}

} // namespace

std::string render_literal(const ProgramGraph &g, const ModeLiteral &lit) {
  return g.variable(lit.var).name + "=" + mode_str(lit.mode);
}

std::string render_scenario(const ProgramGraph &g, const Scenario &scenario) {
  std::string out = "{";
  for (std::size_t i = 0; i < scenario.literals.size(); ++i) {
    if (i)
      out += " & ";
    out += render_literal(g, scenario.literals[i]);
  }
  out += "}";
  return out;
}

Json scenario_json(const ProgramGraph &g, const Scenario &scenario) {
  Json arr = Json::array();
  for (const ModeLiteral &lit : scenario.literals) {
    Json j;
    j["var"] = g.variable(lit.var).name;
    j["mode"] = mode_str(lit.mode);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json analysis_json(const ProgramGraph &g, const ScenarioFormula &formula,
                   const AnalysisOptions &opts, const AggregateResult *quant) {
  Json j;
  j["target"] = {{"var", g.variable(formula.target_var).name},
                 {"mode", mode_str(formula.target_mode)}};
  j["options"] = options_json(opts);
  Json scenarios = Json::array();
  for (const Scenario &sc : formula.scenarios)
    scenarios.push_back(scenario_json(g, sc));
  j["scenarios"] = std::move(scenarios);
  j["scenario_count"] = formula.scenarios.size();
  j["notes"] = formula.notes;
  j["stats"] = {{"rows_expanded", formula.stats.rows_expanded},
                {"conflicts_dropped", formula.stats.conflicts_dropped},
                {"match_pruned", formula.stats.match_pruned}};
  if (opts.with_provenance) {
    Json prov = Json::array();
    for (const Scenario &sc : formula.scenarios)
      prov.push_back(provenance_json(g, sc));
    j["provenance"] = std::move(prov);
  }
  if (quant) {
    Json q;
    q["method"] = std::string(to_string(quant->method));
    q["probability"] = quant->probability;
    Json per = Json::array();
    for (std::size_t i = 0; i < quant->per_scenario.size(); ++i) {
      Json e;
      e["scenario"] = scenario_json(g, formula.scenarios[i]);
      e["probability"] = quant->per_scenario[i];
      per.push_back(std::move(e));
    }
    q["per_scenario"] = std::move(per);
    j["quant"] = std::move(q);
  }
  return j;
}

std::string analysis_text(const ProgramGraph &g,
                          const ScenarioFormula &formula,
                          const AnalysisOptions &opts,
                          const AggregateResult *quant) {
  std::ostringstream os;
  os << "target: " << g.variable(formula.target_var).name << '='
     << mode_letter(formula.target_mode) << "  (variant "
     << to_string(opts.variant)
     << (opts.prune_match ? ", match pruned" : ", match tracked");
  if (opts.include_uncertain)
    os << ", uncertain rows included";
  os << ")\n";

  if (formula.scenarios.empty()) {
    os << "scenarios: none\n";
  } else {
    os << "scenarios (" << formula.scenarios.size() << "):\n";
    for (std::size_t i = 0; i < formula.scenarios.size(); ++i) {
      os << "  " << (i + 1) << ". " << render_scenario(g, formula.scenarios[i]);
      if (quant && i < quant->per_scenario.size()) {
        os << "  p=" << Json(quant->per_scenario[i]).dump();
      }
      os << '\n';
      if (opts.with_provenance)
        provenance_text(os, g, formula.scenarios[i]);
    }
  }
  for (const std::string &note : formula.notes)
    os << "note: " << note << '\n';
  if (quant)
    os << "aggregate (" << to_string(quant->method)
       << "): " << Json(quant->probability).dump() << '\n';
  return os.str();
}

Json conformance_json(const ConformanceReport &report) {
  Json j;
  j["kind"] = report.kind;
  j["sound"] = report.sound;
  j["complete"] = report.complete;
  j["matches_rows"] = report.matches_rows;
  Json observed = Json::array();
  for (const ObservedRow &row : report.observed) {
    Json o;
    Json ins = Json::array();
    for (std::uint8_t i = 0; i < row.inputs.size; ++i)
      ins.push_back(mode_str(row.inputs[i]));
    o["inputs"] = std::move(ins);
    o["outputs"] = row.outputs.render();
    observed.push_back(std::move(o));
  }
  j["observed"] = std::move(observed);
  Json violations = Json::array();
  for (const ConformanceViolation &v : report.violations) {
    Json o;
    o["kind"] = v.kind == ConformanceViolation::Kind::UnwitnessedRow
                    ? "unwitnessed_row"
                    : "uncovered_observation";
    Json ins = Json::array();
    for (std::uint8_t i = 0; i < v.inputs.size; ++i)
      ins.push_back(mode_str(v.inputs[i]));
    o["inputs"] = std::move(ins);
    o["output"] = mode_str(v.output);
    if (!v.witness.empty()) {
      Json w = Json::array();
      for (const FailureState &st : v.witness) {
        Json s;
        if (std::holds_alternative<double>(st.reported)) {
          s["reported"] = std::get<double>(st.reported);
          s["actual"] = std::get<double>(st.actual);
        } else {
          s["reported"] = std::get<bool>(st.reported);
          s["actual"] = std::get<bool>(st.actual);
        }
        w.push_back(std::move(s));
      }
      o["witness"] = std::move(w);
    }
    violations.push_back(std::move(o));
  }
  j["violations"] = std::move(violations);
  return j;
}

std::string conformance_text(const BlockType &type,
                             const ConformanceReport &report) {
  std::ostringstream os;
  os << "kind " << report.kind << ": "
     << (report.sound ? "sound" : "UNSOUND") << ", "
     << (report.complete ? "complete" : "INCOMPLETE")
     << (report.matches_rows ? ", table matches observations"
                             : ", TABLE MISMATCH")
     << '\n';
  os << "  declared table:\n";
  std::istringstream table(render_fmb_table(type));
  std::string line;
  std::getline(table, line); // drop the "kind ..." header line
  while (std::getline(table, line))
    os << "    " << line << '\n';
  os << "  observed (inputs -> modes):\n";
  for (const ObservedRow &row : report.observed) {
    os << "    ";
    for (std::uint8_t i = 0; i < row.inputs.size; ++i)
      os << (i ? " " : "") << mode_letter(row.inputs[i]);
    os << " -> " << row.outputs.render() << '\n';
  }
  for (const ConformanceViolation &v : report.violations) {
    os << "  violation: "
       << (v.kind == ConformanceViolation::Kind::UnwitnessedRow
               ? "row never observed: "
               : "observation not declared: ");
    for (std::uint8_t i = 0; i < v.inputs.size; ++i)
      os << (i ? " " : "") << mode_letter(v.inputs[i]);
    os << " -> " << mode_letter(v.output);
    if (!v.witness.empty()) {
      os << "  [witness";
      for (const FailureState &st : v.witness)
        os << " (" << to_string(st.reported) << '/' << to_string(st.actual)
           << ')';
      os << ']';
    }
    os << '\n';
  }
  return os.str();
}

} // namespace fmr
