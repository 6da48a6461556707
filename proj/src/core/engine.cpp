//===- engine.cpp - Backward failure mode reasoning -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/engine.hpp"

#include "core/errors.hpp"

#include <algorithm>

namespace fmr {

bool Scenario::unify(ModeLiteral lit) {
  auto it = std::lower_bound(literals.begin(), literals.end(), lit,
                             [](const ModeLiteral &a, const ModeLiteral &b) {
                               return a.var < b.var;
                             });
  if (it != literals.end() && it->var == lit.var)
    return it->mode == lit.mode;
  literals.insert(it, lit);
  return true;
}

const ModeLiteral *Scenario::find(int var) const {
  auto it = std::lower_bound(literals.begin(), literals.end(), var,
                             [](const ModeLiteral &a, int v) { return a.var < v; });
  if (it != literals.end() && it->var == var)
    return &*it;
  return nullptr;
}

void Scenario::erase(int var) {
  auto it = std::lower_bound(literals.begin(), literals.end(), var,
                             [](const ModeLiteral &a, int v) { return a.var < v; });
  if (it != literals.end() && it->var == var)
    literals.erase(it);
}

bool scenario_less(const Scenario &a, const Scenario &b) {
  return std::lexicographical_compare(
      a.literals.begin(), a.literals.end(), b.literals.begin(),
      b.literals.end());
}

bool scenario_equal(const Scenario &a, const Scenario &b) {
  return a.literals == b.literals;
}

bool scenario_subsumes(const Scenario &a, const Scenario &b) {
  return std::includes(b.literals.begin(), b.literals.end(),
                       a.literals.begin(), a.literals.end());
}

void simplify(std::vector<Scenario> &scenarios) {
  std::sort(scenarios.begin(), scenarios.end(), scenario_less);
  scenarios.erase(
      std::unique(scenarios.begin(), scenarios.end(), scenario_equal),
      scenarios.end());
  // Absorption: a scenario strictly containing another adds no satisfying
  // assignment, so drop it. After deduplication subsumption between
  // distinct entries is always strict, so the keep decision is stable and
  // can be taken for all entries before compacting.
  std::vector<bool> keep(scenarios.size(), true);
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    for (std::size_t j = 0; j < scenarios.size() && keep[i]; ++j)
      if (j != i && scenario_subsumes(scenarios[j], scenarios[i]))
        keep[i] = false;
  std::vector<Scenario> kept;
  kept.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    if (keep[i])
      kept.push_back(std::move(scenarios[i]));
  scenarios = std::move(kept);
}

namespace {

void dedupe_working_set(std::vector<Scenario> &scenarios) {
  std::sort(scenarios.begin(), scenarios.end(), scenario_less);
  scenarios.erase(
      std::unique(scenarios.begin(), scenarios.end(), scenario_equal),
      scenarios.end());
}

} // namespace

ScenarioFormula backward_analyze(const ProgramGraph &g, const Catalog &catalog,
                                 int target_var, FailureMode target_mode,
                                 const AnalysisOptions &opts) {
  if (target_var < 0 || target_var >= static_cast<int>(g.variables().size()))
    throw Error("target variable index out of range");
  const Variable &target = g.variable(target_var);
  if (target.role != VarRole::Output)
    throw Error("target variable '" + target.name +
                "' is not an output variable");
  if (!mode_legal_for(target_mode, target.type))
    throw Error(std::string("target mode '") + mode_letter(target_mode) +
                "' is not legal for " + to_string(target.type) +
                " variable '" + target.name + "'");

  ScenarioFormula out;
  out.target_var = target_var;
  out.target_mode = target_mode;

  // Variant-filtered tables, resolved once per kind used in the cone.
  std::map<std::string, Fmb, std::less<>> tables;
  auto table_of = [&](const std::string &kind) -> const Fmb & {
    auto it = tables.find(kind);
    if (it == tables.end())
      it = tables.emplace(kind, fmb_lookup(catalog, kind, opts.variant)).first;
    return it->second;
  };

  // Only blocks the target depends on can ever carry a literal.
  std::vector<bool> in_cone(g.blocks().size(), false);
  for (int b : g.cone_blocks(target_var))
    in_cone[b] = true;

  std::vector<Scenario> scenarios(1);
  scenarios[0].unify({target_var, target_mode});

  const std::vector<int> &topo = g.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int bi = *it;
    if (!in_cone[bi])
      continue;
    const BlockInstance &blk = g.block(bi);

    std::vector<Scenario> next;
    next.reserve(scenarios.size());
    bool changed = false;
    for (Scenario &sc : scenarios) {
      const ModeLiteral *lit = sc.find(blk.output);
      if (!lit) {
        next.push_back(std::move(sc));
        continue;
      }
      FailureMode mode = lit->mode;
      changed = true;

      if (opts.prune_match && mode == FailureMode::Match) {
        sc.erase(blk.output);
        if (opts.with_provenance)
          sc.trace.push_back({ProvenanceStep::Kind::Prune, bi, blk.output,
                              FailureMode::Match, {}});
        ++out.stats.match_pruned;
        next.push_back(std::move(sc));
        continue;
      }

      sc.erase(blk.output);
      const Fmb &table = table_of(blk.kind);
      for (const ModeTuple &row :
           table.inverse(mode, opts.include_uncertain)) {
        Scenario child = sc; // copy: each row forks the scenario
        bool alive = true;
        for (std::uint8_t i = 0; i < row.size && alive; ++i)
          alive = child.unify({blk.inputs[i], row[i]});
        if (!alive) {
          ++out.stats.conflicts_dropped;
          continue;
        }
        ++out.stats.rows_expanded;
        if (opts.with_provenance)
          child.trace.push_back(
              {ProvenanceStep::Kind::Expand, bi, blk.output, mode, row});
        next.push_back(std::move(child));
      }
    }
    scenarios = std::move(next);
    if (changed)
      dedupe_working_set(scenarios);
    if (scenarios.size() > opts.max_scenarios)
      throw Error("analysis exceeded the scenario limit (" +
                  std::to_string(opts.max_scenarios) + ")");
  }

  if (opts.prune_match) {
    // Remaining match literals sit on input variables; under pruning they
    // carry no tracking obligation.
    for (Scenario &sc : scenarios) {
      std::size_t before = sc.literals.size();
      if (opts.with_provenance)
        for (const ModeLiteral &lit : sc.literals)
          if (lit.mode == FailureMode::Match)
            sc.trace.push_back({ProvenanceStep::Kind::Prune, -1, lit.var,
                                FailureMode::Match, {}});
      std::erase_if(sc.literals, [](const ModeLiteral &lit) {
        return lit.mode == FailureMode::Match;
      });
      out.stats.match_pruned += before - sc.literals.size();
    }
  }

  std::size_t raw = scenarios.size();
  simplify(scenarios);
  out.scenarios = std::move(scenarios);

  if (out.scenarios.empty())
    out.notes.push_back("no input failure scenario can produce this target "
                        "mode under the selected options");
  else if (out.scenarios.size() == 1 && out.scenarios[0].literals.empty())
    out.notes.push_back("the target mode requires no input failure at all "
                        "under the selected options");
  if (raw != out.scenarios.size())
    out.notes.push_back("simplification reduced " + std::to_string(raw) +
                        " raw scenarios to " +
                        std::to_string(out.scenarios.size()));
  return out;
}

} // namespace fmr
