//===- acceptance_main.cpp - End-to-end acceptance checklist --------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Runs the acceptance checklist for the analysis engine and prints one
// PASS/FAIL line per item. The process exit code is the number of failed
// items, so `ctest` treats any failure as a test failure.
//
//   1. averaged-alarm shortlist (fixed program, known answer, < 1 s)
//   2. redundant-channel conjunction (practical variant single scenario)
//   3. built-in table conformance against exhaustive simulation (< 5 s)
//   4. randomized ground truth: backward analysis vs brute force
//   5. randomized composition: engine vs direct table substitution
//   6. randomized simplification soundness
//   7. scale run over a multi-cone program (< 60 s)
//   8. probability aggregation vs independent enumeration
//
//===----------------------------------------------------------------------===//

#include "core/catalog.hpp"
#include "core/engine.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/program.hpp"
#include "core/quant.hpp"

#include "testutil.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#ifndef FMR_SAMPLES_DIR
#error "FMR_SAMPLES_DIR must point at the sample programs"
#endif

using namespace fmr;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string sample(const std::string &name) {
  return std::string(FMR_SAMPLES_DIR) + "/" + name;
}

using Named = std::set<std::vector<std::pair<std::string, char>>>;

//===----------------------------------------------------------------------===//
// 1. Averaged alarm: the shortlist for a missed alarm is exactly one low
//    sensor on either channel, and the answer returns quickly.
//===----------------------------------------------------------------------===//

bool check_alarm_shortlist(std::string &detail) {
  auto start = Clock::now();
  Catalog cat = Catalog::builtins();
  ProgramGraph g = parse_program(read_file(sample("t_avg.fmrprog")), cat);
  ScenarioFormula f =
      backward_analyze(g, cat, g.var_index("o"), FailureMode::FalseFault,
                       AnalysisOptions{});
  double elapsed = seconds_since(start);

  Named expect = {{{"i1", 'l'}}, {{"i2", 'l'}}};
  bool ok = fmrtest::named_scenarios(g, f.scenarios) == expect &&
            elapsed < 1.0;
  std::ostringstream os;
  os << f.scenarios.size() << " scenarios in " << elapsed * 1e3 << " ms";
  detail = os.str();
  return ok;
}

//===----------------------------------------------------------------------===//
// 2. Redundant channels: under the practical variant a missed alarm needs
//    both sensors low, in one conjoined scenario.
//===----------------------------------------------------------------------===//

bool check_redundant_channels(std::string &detail) {
  Catalog cat = Catalog::builtins();
  ProgramGraph g = parse_program(read_file(sample("t_or.fmrprog")), cat);
  ScenarioFormula f =
      backward_analyze(g, cat, g.var_index("o"), FailureMode::FalseFault,
                       AnalysisOptions{});
  Named expect = {{{"i1", 'l'}, {"i2", 'l'}}};
  bool ok = fmrtest::named_scenarios(g, f.scenarios) == expect;
  detail = std::to_string(f.scenarios.size()) + " scenario";
  return ok;
}

//===----------------------------------------------------------------------===//
// 3. Table conformance: every built-in table is reproduced row-for-row by
//    exhaustive simulation, including the uncertain gate rows.
//===----------------------------------------------------------------------===//

bool check_table_conformance(std::string &detail) {
  auto start = Clock::now();
  Catalog cat = Catalog::builtins();
  bool ok = true;
  std::string bad;
  for (const std::string &name : cat.names()) {
    const BlockType &type = cat.at(name);
    WitnessGrid grid = WitnessGrid::for_block(type, 1.0, 0.5);
    ConformanceReport rep = verify_fmb(type, grid);
    if (!(rep.sound && rep.complete && rep.matches_rows)) {
      ok = false;
      bad += (bad.empty() ? "" : ", ") + name;
    }
  }

  // The two gates carry exactly two uncertain rows each (And's produce t,
  // Or's produce f) and the uncertain transitions really occur.
  auto uncertain_rows = [&](const std::string &kind, FailureMode produced) {
    std::size_t n = 0;
    for (const FmbRow &row : cat.at(kind).fmb.rows())
      n += (row.uncertain && row.output == produced) ? 1 : 0;
    for (const FmbRow &row : cat.at(kind).fmb.rows())
      if (row.uncertain && row.output != produced)
        n = 99; // unexpected uncertain outcome
    return n;
  };
  ok = ok && uncertain_rows("And", FailureMode::TrueFault) == 2 &&
       uncertain_rows("Or", FailureMode::FalseFault) == 2;
  for (const char *kind : {"And", "Or"}) {
    const BlockType &type = cat.at(kind);
    WitnessGrid grid = WitnessGrid::for_block(type, 1.0, 0.5);
    ConformanceReport rep = verify_fmb(type, grid);
    for (const FmbRow &row : type.fmb.rows()) {
      if (!row.uncertain)
        continue;
      bool seen = false;
      for (const ObservedRow &obs : rep.observed)
        seen = seen || (obs.inputs == row.inputs &&
                        obs.outputs.contains(row.output));
      ok = ok && seen;
    }
  }

  double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  std::ostringstream os;
  os << cat.names().size() << " kinds in " << elapsed * 1e3 << " ms";
  if (!bad.empty())
    os << "; failed: " << bad;
  detail = os.str();
  return ok;
}

//===----------------------------------------------------------------------===//
// 4. Randomized ground truth. The generator only builds programs on which
//    table composition is exact (tree wiring, full-range comparator and
//    Abs arguments, gates fed by comparators), so the full expansion of
//    the backward result must equal brute force exactly, and the pruned
//    practical shortlist must stay inside it.
//===----------------------------------------------------------------------===//

bool check_randomized_ground_truth(std::string &detail) {
  auto start = Clock::now();
  Catalog cat = Catalog::builtins();
  std::mt19937_64 rng(0x5eed0444);
  const int kPrograms = 200;
  int targets_checked = 0;
  int mismatches = 0;
  std::string first_bad;

  for (int i = 0; i < kPrograms; ++i) {
    std::string text = fmrtest::random_tree_program(rng);
    ProgramGraph g = parse_program(text, cat);
    int target = g.output_vars().at(0);
    auto inputs = g.cone_inputs(target);

    // Averaging blocks halve input errors, so witnessing the deepest
    // claims needs sub-step samples. Use the finest grid whose input
    // vector space the brute oracle will still enumerate.
    WitnessGrid grid = WitnessGrid::for_program(g, 0.5);
    WitnessGrid fine = grid.densified();
    auto vector_space = [&](const WitnessGrid &wg) {
      double v = 1.0;
      for (int idx : inputs)
        v *= g.variable(idx).type == SignalType::Real
                 ? static_cast<double>(wg.reals.size())
                 : 2.0;
      return v;
    };
    if (vector_space(fine) <= 30000.0)
      grid = fine;
    CausingTuples truth = brute_force_program(g, cat, target, grid);

    for (FailureMode mode : legal_modes(g.variable(target).type)) {
      AnalysisOptions full;
      full.variant = FmbVariant::Theoretical;
      full.prune_match = false;
      full.include_uncertain = true;
      ScenarioFormula wide = backward_analyze(g, cat, target, mode, full);
      bool equal = expand_scenarios(wide, g, inputs, ExpandFill::AllModes) ==
                   truth.causing(mode);

      ScenarioFormula practical =
          backward_analyze(g, cat, target, mode, AnalysisOptions{});
      bool subset = true;
      for (const auto &tuple :
           expand_scenarios(practical, g, inputs, ExpandFill::MatchOnly))
        subset = subset && truth.causing(mode).count(tuple) == 1;

      ++targets_checked;
      if (!(equal && subset)) {
        ++mismatches;
        if (first_bad.empty()) {
          first_bad = "program " + std::to_string(i) + " target mode " +
                      std::string(1, mode_letter(mode)) +
                      (equal ? " (practical escaped)" : " (full mismatch)");
        }
      }
    }
  }

  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kPrograms << " programs, " << targets_checked << " targets in "
     << elapsed << " s";
  if (mismatches)
    os << "; " << mismatches << " mismatches, first at " << first_bad;
  detail = os.str();
  return mismatches == 0;
}

//===----------------------------------------------------------------------===//
// 5. Composition: on a two-block chain the engine must agree with direct
//    substitution of one inverse table into the other.
//===----------------------------------------------------------------------===//

bool check_composition(std::string &detail) {
  auto start = Clock::now();
  Catalog cat = Catalog::builtins();
  std::mt19937_64 rng(0x5eed0555);
  const int kChains = 500;
  int checked = 0;
  int mismatches = 0;
  std::string first_bad;

  for (int i = 0; i < kChains; ++i) {
    fmrtest::ChainSpec spec = fmrtest::random_chain(rng, cat);
    ProgramGraph g = parse_program(spec.text(cat), cat);
    AnalysisOptions opts;
    opts.variant = FmbVariant::Theoretical;
    opts.prune_match = false;
    opts.include_uncertain = true;
    for (FailureMode target : legal_modes(cat.at(spec.kind2).out_type)) {
      ScenarioFormula f =
          backward_analyze(g, cat, g.var_index("o"), target, opts);
      auto expect = fmrtest::reference_chain_backward(
          spec, cat, target, opts.variant, opts.include_uncertain);
      ++checked;
      if (fmrtest::named_scenarios(g, f.scenarios) != expect) {
        ++mismatches;
        if (first_bad.empty())
          first_bad = spec.kind1 + " into " + spec.kind2 + " target " +
                      mode_letter(target);
      }
    }
  }

  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kChains << " chains, " << checked << " formulas in " << elapsed
     << " s";
  if (mismatches)
    os << "; " << mismatches << " mismatches, first: " << first_bad;
  detail = os.str();
  return mismatches == 0;
}

//===----------------------------------------------------------------------===//
// 6. Simplification: the canonical form preserves the satisfying set, is
//    free of absorbed scenarios, and is idempotent.
//===----------------------------------------------------------------------===//

bool check_simplification(std::string &detail) {
  auto start = Clock::now();
  std::mt19937_64 rng(0x5eed0666);
  const int kCases = 1000;
  int bad = 0;

  for (int i = 0; i < kCases; ++i) {
    fmrtest::DnfCase c = fmrtest::random_dnf(rng);
    auto before = fmrtest::dnf_satisfying_set(c, c.scenarios);

    std::vector<Scenario> simplified = c.scenarios;
    simplify(simplified);
    auto after = fmrtest::dnf_satisfying_set(c, simplified);

    bool ok = before == after;
    for (std::size_t a = 0; a < simplified.size() && ok; ++a)
      for (std::size_t b = 0; b < simplified.size() && ok; ++b)
        ok = a == b || !scenario_subsumes(simplified[a], simplified[b]);

    std::vector<Scenario> twice = simplified;
    simplify(twice);
    ok = ok && twice.size() == simplified.size();
    for (std::size_t a = 0; a < twice.size() && ok; ++a)
      ok = scenario_equal(twice[a], simplified[a]);

    bad += ok ? 0 : 1;
  }

  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kCases << " formulas in " << elapsed << " s";
  if (bad)
    os << "; " << bad << " violations";
  detail = os.str();
  return bad == 0;
}

//===----------------------------------------------------------------------===//
// 7. Scale: a synthetic plant-sized program parses and every output
//    analyzes, in every legal mode, within the time budget.
//===----------------------------------------------------------------------===//

bool check_scale(std::string &detail) {
  auto start = Clock::now();
  Catalog cat = Catalog::builtins();
  std::string text = fmrtest::scale_program_text();
  ProgramGraph g = parse_program(text, cat);

  bool shape_ok = g.blocks().size() >= 2000 && g.input_vars().size() >= 90 &&
                  g.output_vars().size() >= 25;

  std::size_t formulas = 0;
  std::size_t scenarios = 0;
  for (int out : g.output_vars())
    for (FailureMode mode : legal_modes(g.variable(out).type)) {
      ScenarioFormula f =
          backward_analyze(g, cat, out, mode, AnalysisOptions{});
      ++formulas;
      scenarios += f.scenarios.size();
    }

  double elapsed = seconds_since(start);
  bool ok = shape_ok && elapsed < 60.0;
  std::ostringstream os;
  os << g.blocks().size() << " blocks, " << g.input_vars().size()
     << " inputs, " << g.output_vars().size() << " outputs; " << formulas
     << " formulas (" << scenarios << " scenarios) in " << elapsed << " s";
  detail = os.str();
  return ok;
}

//===----------------------------------------------------------------------===//
// 8. Probabilities: both aggregation methods match an independent
//    enumeration over all input mode assignments to within 1e-9.
//===----------------------------------------------------------------------===//

bool check_probability(std::string &detail) {
  Catalog cat = Catalog::builtins();
  ProgramGraph g = parse_program(read_file(sample("t_avg.fmrprog")), cat);
  ScenarioFormula f =
      backward_analyze(g, cat, g.var_index("o"), FailureMode::FalseFault,
                       AnalysisOptions{});
  FailureData data = FailureData::parse(read_file(sample("data.json")));

  AggregateResult exact =
      aggregate(f, g, data, AggregateMethod::InclusionExclusion);
  AggregateResult rare = aggregate(f, g, data, AggregateMethod::RareEvent);

  // Independent ground truth: walk every total mode assignment of the cone
  // inputs and add up the satisfying ones.
  auto inputs = g.cone_inputs(g.var_index("o"));
  double truth_union = 0.0;
  double truth_sum_capped = 0.0;
  std::vector<std::size_t> pick(inputs.size(), 0);
  for (;;) {
    double p = 1.0;
    std::vector<std::pair<int, FailureMode>> assign;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const Variable &v = g.variable(inputs[i]);
      FailureMode m = legal_modes(v.type)[pick[i]];
      assign.emplace_back(inputs[i], m);
      p *= data.mode_probability(v.name, v.type, m);
    }
    bool sat = false;
    double over_count = 0.0;
    for (const Scenario &sc : f.scenarios) {
      bool all = true;
      for (const ModeLiteral &lit : sc.literals) {
        bool here = false;
        for (auto &[var, mode] : assign)
          here = here || (var == lit.var && mode == lit.mode);
        all = all && here;
      }
      sat = sat || all;
      over_count += all ? 1.0 : 0.0;
    }
    if (sat)
      truth_union += p;
    truth_sum_capped += p * over_count; // counts overlaps twice, like the
                                        // rare-event reading
    std::size_t i = 0;
    while (i < inputs.size() && ++pick[i] == 3) {
      pick[i] = 0;
      ++i;
    }
    if (i == inputs.size())
      break;
  }
  truth_sum_capped = std::min(truth_sum_capped, 1.0);

  bool ok = std::abs(exact.probability - truth_union) < 1e-9 &&
            std::abs(rare.probability - truth_sum_capped) < 1e-9 &&
            std::abs(exact.probability - 1.999e-3) < 1e-9 &&
            std::abs(rare.probability - 2.0e-3) < 1e-9;
  std::ostringstream os;
  os.precision(10);
  os << "exact " << exact.probability << " vs " << truth_union << ", rare "
     << rare.probability << " vs " << truth_sum_capped;
  detail = os.str();
  return ok;
}

} // namespace

int main() {
  struct Item {
    const char *name;
    bool (*check)(std::string &);
  };
  const Item items[] = {
      {"averaged alarm shortlist", check_alarm_shortlist},
      {"redundant channel conjunction", check_redundant_channels},
      {"built-in table conformance", check_table_conformance},
      {"randomized ground truth", check_randomized_ground_truth},
      {"two-block composition", check_composition},
      {"simplification soundness", check_simplification},
      {"scale analysis", check_scale},
      {"probability aggregation", check_probability},
  };

  int failures = 0;
  int index = 0;
  for (const Item &item : items) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = item.check(detail);
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    failures += ok ? 0 : 1;
    std::printf("%s  %d. %s (%s)\n", ok ? "PASS" : "FAIL", index, item.name,
                detail.c_str());
    std::fflush(stdout);
  }

  if (failures)
    std::printf("%d of %zu checks failed\n", failures,
                std::size(items));
  else
    std::printf("all %zu checks passed\n", std::size(items));
  return failures;
}
