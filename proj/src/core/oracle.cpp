//===- oracle.cpp - Concrete-execution ground truth -----------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/oracle.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fmr {

namespace {

// Spread base samples so every real mode pair has witnesses on both sides
// of zero (two distinct negatives are needed for magnitude comparisons).
// The magnitudes form a halving ladder: averaging blocks attenuate one
// input's error by 2 per stage, so witnessing a large attenuated error
// against a small direct one needs sample errors several octaves apart.
constexpr double kBaseSamples[] = {-1.0,  -0.5, -0.25, -0.125, 0.0,
                                   0.125, 0.25, 0.5,   1.0};

void insert_sorted_unique(std::vector<double> &xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

} // namespace

WitnessGrid WitnessGrid::for_thresholds(std::span<const double> thresholds,
                                        bool with_abs, double delta) {
  if (!(delta > 0) || !std::isfinite(delta))
    throw Error("witness grid delta must be a positive finite number");
  WitnessGrid grid;
  grid.delta = delta;
  grid.reals.assign(std::begin(kBaseSamples), std::end(kBaseSamples));
  for (double k : thresholds) {
    if (!std::isfinite(k))
      throw Error("comparator threshold must be finite");
    for (int j = -2; j <= 2; ++j)
      grid.reals.push_back(k + j * delta);
  }
  if (with_abs) {
    std::vector<double> negs;
    negs.reserve(grid.reals.size());
    for (double x : grid.reals)
      negs.push_back(-x);
    grid.reals.insert(grid.reals.end(), negs.begin(), negs.end());
  }
  insert_sorted_unique(grid.reals);
  return grid;
}

WitnessGrid WitnessGrid::for_block(const BlockType &type,
                                   std::optional<double> threshold,
                                   double delta) {
  std::vector<double> ks;
  if (type.takes_threshold)
    ks.push_back(threshold.value_or(1.0));
  bool with_abs = type.builtin == Builtin::Abs;
  return for_thresholds(ks, with_abs, delta);
}

WitnessGrid WitnessGrid::for_program(const ProgramGraph &g, double delta) {
  std::vector<double> ks;
  bool with_abs = false;
  for (const BlockInstance &blk : g.blocks()) {
    if (blk.threshold)
      ks.push_back(*blk.threshold);
    if (blk.kind == "Abs")
      with_abs = true;
  }
  return for_thresholds(ks, with_abs, delta);
}

WitnessGrid WitnessGrid::densified() const {
  WitnessGrid out;
  out.delta = delta / 2;
  out.reals.reserve(reals.size() * 2);
  for (std::size_t i = 0; i < reals.size(); ++i) {
    out.reals.push_back(reals[i]);
    if (i + 1 < reals.size())
      out.reals.push_back((reals[i] + reals[i + 1]) / 2);
  }
  insert_sorted_unique(out.reals);
  return out;
}

std::vector<FailureState> WitnessGrid::pairs(SignalType ty) const {
  std::vector<FailureState> out;
  if (ty == SignalType::Bool) {
    for (bool reported : {false, true})
      for (bool actual : {false, true})
        out.push_back({Value(reported), Value(actual)});
    return out;
  }
  out.reserve(reals.size() * reals.size());
  for (double reported : reals)
    for (double actual : reals)
      out.push_back({Value(reported), Value(actual)});
  return out;
}

void run_program(const ProgramGraph &g, const Catalog &catalog,
                 std::vector<Value> &values) {
  if (values.size() != g.variables().size())
    throw Error("value vector size does not match the variable count");
  for (int bi : g.topo_order()) {
    const BlockInstance &blk = g.block(bi);
    const BlockType &type = catalog.at(blk.kind);
    if (!type.builtin)
      throw Error("block kind '" + blk.kind +
                  "' has no concrete semantics to simulate");
    std::vector<Value> ins;
    ins.reserve(blk.inputs.size());
    for (int v : blk.inputs)
      ins.push_back(values[v]);
    values[blk.output] = eval_builtin(*type.builtin, blk.threshold, ins);
  }
}

namespace {

// Shared core of the two verify_fmb overloads.
ConformanceReport verify_against(const BlockType &type, const Fmb &fmb,
                                 const WitnessGrid &grid, double threshold) {
  if (!type.builtin)
    throw Error("block kind '" + type.name +
                "' has no concrete semantics to verify against");
  if (fmb.input_types() != type.in_types || fmb.output_type() != type.out_type)
    throw Error("table signature does not match block kind '" + type.name +
                "'");

  std::optional<double> k;
  if (type.takes_threshold)
    k = threshold;

  std::vector<std::vector<FailureState>> slot_pairs;
  for (SignalType ty : type.in_types)
    slot_pairs.push_back(grid.pairs(ty));

  std::vector<ModeTuple> tuples = fmb.all_input_tuples();
  auto tuple_pos = [&](const ModeTuple &t) {
    return static_cast<std::size_t>(
        std::lower_bound(tuples.begin(), tuples.end(), t) - tuples.begin());
  };

  // Observation accumulation, plus one concrete witness per (tuple, mode).
  std::vector<ModeSet> observed(tuples.size(), ModeSet::none(type.out_type));
  std::vector<std::vector<std::vector<FailureState>>> witness(
      tuples.size(),
      std::vector<std::vector<FailureState>>(kModeCount));

  auto record = [&](const std::vector<FailureState> &ins) {
    ModeTuple t;
    t.size = static_cast<std::uint8_t>(ins.size());
    std::vector<Value> rep, act;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      t.modes[i] = classify(ins[i], type.in_types[i]);
      rep.push_back(ins[i].reported);
      act.push_back(ins[i].actual);
    }
    FailureState out{eval_builtin(*type.builtin, k, rep),
                     eval_builtin(*type.builtin, k, act)};
    FailureMode mode = classify(out, type.out_type);
    std::size_t pos = tuple_pos(t);
    observed[pos].insert(mode);
    auto &w = witness[pos][static_cast<std::size_t>(mode)];
    if (w.empty())
      w = ins;
  };

  if (type.arity() == 1) {
    for (const FailureState &a : slot_pairs[0])
      record({a});
  } else {
    for (const FailureState &a : slot_pairs[0])
      for (const FailureState &b : slot_pairs[1])
        record({a, b});
  }

  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (observed[i].empty())
      throw Error("witness grid does not cover input combination " +
                  tuples[i].render() + " of kind '" + type.name + "'");

  ConformanceReport report;
  report.kind = type.name;
  report.sound = true;
  report.complete = true;

  for (std::size_t i = 0; i < tuples.size(); ++i)
    report.observed.push_back({tuples[i], observed[i]});

  // Sound: every declared transition happens on the grid.
  for (const FmbRow &row : fmb.rows()) {
    if (!observed[tuple_pos(row.inputs)].contains(row.output)) {
      report.sound = false;
      report.violations.push_back({ConformanceViolation::Kind::UnwitnessedRow,
                                   row.inputs, row.output, {}});
    }
  }

  // Complete: every observed transition is declared (uncertain rows count).
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ForwardModes declared = fmb.forward(tuples[i], /*include_uncertain=*/true);
    for (FailureMode m : legal_modes(type.out_type)) {
      if (!observed[i].contains(m))
        continue;
      if (!declared.modes.contains(m)) {
        report.complete = false;
        report.violations.push_back(
            {ConformanceViolation::Kind::UncoveredObservation, tuples[i], m,
             witness[i][static_cast<std::size_t>(m)]});
      }
    }
  }

  report.matches_rows = true;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ForwardModes declared = fmb.forward(tuples[i], /*include_uncertain=*/true);
    if (!(declared.modes == observed[i]))
      report.matches_rows = false;
  }
  return report;
}

} // namespace

ConformanceReport verify_fmb(const BlockType &type, const WitnessGrid &grid,
                             double threshold) {
  return verify_against(type, type.fmb, grid, threshold);
}

ConformanceReport verify_fmb(const BlockType &type, const Fmb &fmb,
                             const WitnessGrid &grid, double threshold) {
  return verify_against(type, fmb, grid, threshold);
}

std::size_t
CausingTuples::tuple_index(std::span<const FailureMode> modes) const {
  if (modes.size() != types_.size())
    throw Error("mode tuple arity does not match the cone input count");
  std::size_t index = 0, stride = 1;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    std::span<const FailureMode> legal = legal_modes(types_[i]);
    std::size_t digit = legal.size();
    for (std::size_t d = 0; d < legal.size(); ++d)
      if (legal[d] == modes[i])
        digit = d;
    if (digit == legal.size())
      throw Error(std::string("mode '") + mode_letter(modes[i]) +
                  "' is not legal for cone input " + std::to_string(i));
    index += digit * stride;
    stride *= legal.size();
  }
  return index;
}

std::vector<FailureMode> CausingTuples::tuple_at(std::size_t index) const {
  std::vector<FailureMode> modes(types_.size(), FailureMode::Match);
  for (std::size_t i = 0; i < types_.size(); ++i) {
    std::span<const FailureMode> legal = legal_modes(types_[i]);
    modes[i] = legal[index % legal.size()];
    index /= legal.size();
  }
  return modes;
}

std::set<std::vector<FailureMode>>
CausingTuples::causing(FailureMode mode) const {
  std::set<std::vector<FailureMode>> out;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].contains(mode))
      out.insert(tuple_at(i));
  return out;
}

CausingTuples brute_force_program(const ProgramGraph &g,
                                  const Catalog &catalog, int target_var,
                                  const WitnessGrid &grid) {
  CausingTuples result;
  result.inputs = g.cone_inputs(target_var);
  const std::size_t k = result.inputs.size();
  if (k > 8)
    throw Error("brute force supports at most 8 cone inputs, target has " +
                std::to_string(k));
  for (int v : result.inputs)
    result.types_.push_back(g.variable(v).type);

  // Concrete sample list per cone input.
  std::vector<std::vector<Value>> samples(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (result.types_[i] == SignalType::Real) {
      for (double x : grid.reals)
        samples[i].push_back(Value(x));
    } else {
      samples[i] = {Value(false), Value(true)};
    }
  }

  std::size_t vectors = 1;
  for (const auto &s : samples) {
    vectors *= s.size();
    if (vectors > 30000)
      throw Error("brute force input space too large to enumerate");
  }

  // Cone blocks in dependency order; everything else is irrelevant.
  std::vector<int> cone = g.cone_blocks(target_var);
  std::vector<bool> in_cone(g.blocks().size(), false);
  for (int b : cone)
    in_cone[b] = true;
  std::vector<int> order;
  for (int b : g.topo_order())
    if (in_cone[b])
      order.push_back(b);
  struct ConeBlock {
    Builtin builtin;
    std::optional<double> threshold;
    std::vector<int> inputs;
    int output;
  };
  std::vector<ConeBlock> plan;
  for (int bi : order) {
    const BlockInstance &blk = g.block(bi);
    const BlockType &type = catalog.at(blk.kind);
    if (!type.builtin)
      throw Error("block kind '" + blk.kind +
                  "' has no concrete semantics to simulate");
    plan.push_back({*type.builtin, blk.threshold, blk.inputs, blk.output});
  }

  // Evaluate every input vector once; remember its per-slot sample indices
  // and the target value.
  SignalType out_type = g.variable(target_var).type;
  std::vector<std::uint8_t> slot_idx(vectors * std::max<std::size_t>(k, 1));
  std::vector<double> out_real;
  std::vector<std::uint8_t> out_bool;
  if (out_type == SignalType::Real)
    out_real.resize(vectors);
  else
    out_bool.resize(vectors);

  std::vector<Value> values(g.variables().size(), Value(0.0));
  for (std::size_t v = 0; v < vectors; ++v) {
    std::size_t rest = v;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t d = rest % samples[i].size();
      rest /= samples[i].size();
      slot_idx[v * k + i] = static_cast<std::uint8_t>(d);
      values[result.inputs[i]] = samples[i][d];
    }
    for (const ConeBlock &blk : plan) {
      std::vector<Value> ins;
      ins.reserve(blk.inputs.size());
      for (int in : blk.inputs)
        ins.push_back(values[in]);
      values[blk.output] = eval_builtin(blk.builtin, blk.threshold, ins);
    }
    if (out_type == SignalType::Real)
      out_real[v] = std::get<double>(values[target_var]);
    else
      out_bool[v] = std::get<bool>(values[target_var]) ? 1 : 0;
  }

  // Mode digit of every (reported sample, actual sample) pair, per slot.
  std::vector<std::vector<std::uint8_t>> mode_lut(k);
  std::vector<std::size_t> stride(k, 1);
  std::size_t tuple_count = 1;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t n = samples[i].size();
    mode_lut[i].resize(n * n);
    std::span<const FailureMode> legal = legal_modes(result.types_[i]);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t a = 0; a < n; ++a) {
        FailureMode m = classify({samples[i][r], samples[i][a]},
                                 result.types_[i]);
        std::uint8_t digit = 0;
        for (std::size_t d = 0; d < legal.size(); ++d)
          if (legal[d] == m)
            digit = static_cast<std::uint8_t>(d);
        mode_lut[i][r * n + a] = digit;
      }
    stride[i] = tuple_count;
    tuple_count *= legal.size();
  }

  result.table.assign(tuple_count, ModeSet::none(out_type));

  // The quadratic sweep: reported vector x actual vector.
  for (std::size_t vr = 0; vr < vectors; ++vr) {
    const std::uint8_t *ridx = &slot_idx[vr * k];
    for (std::size_t va = 0; va < vectors; ++va) {
      const std::uint8_t *aidx = &slot_idx[va * k];
      std::size_t tuple = 0;
      for (std::size_t i = 0; i < k; ++i)
        tuple += mode_lut[i][ridx[i] * samples[i].size() + aidx[i]] *
                 stride[i];
      FailureMode mode;
      if (out_type == SignalType::Real)
        mode = classify_real(out_real[vr], out_real[va]);
      else
        mode = classify_bool(out_bool[vr] != 0, out_bool[va] != 0);
      result.table[tuple].insert(mode);
    }
  }
  return result;
}

std::set<std::vector<FailureMode>>
expand_scenarios(const ScenarioFormula &formula, const ProgramGraph &g,
                 std::span<const int> inputs, ExpandFill fill) {
  std::set<std::vector<FailureMode>> out;
  for (const Scenario &sc : formula.scenarios) {
    // Per universe slot: the literal's mode, or the fill choice.
    std::vector<std::vector<FailureMode>> choices(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (const ModeLiteral *lit = sc.find(inputs[i])) {
        choices[i] = {lit->mode};
      } else if (fill == ExpandFill::MatchOnly) {
        choices[i] = {FailureMode::Match};
      } else {
        std::span<const FailureMode> legal =
            legal_modes(g.variable(inputs[i]).type);
        choices[i].assign(legal.begin(), legal.end());
      }
    }
    for (const ModeLiteral &lit : sc.literals)
      if (std::find(inputs.begin(), inputs.end(), lit.var) == inputs.end())
        throw Error("scenario mentions variable '" + g.variable(lit.var).name +
                    "' outside the expansion universe");

    std::vector<std::size_t> pick(inputs.size(), 0);
    while (true) {
      std::vector<FailureMode> tuple(inputs.size());
      for (std::size_t i = 0; i < inputs.size(); ++i)
        tuple[i] = choices[i][pick[i]];
      out.insert(std::move(tuple));
      std::size_t i = 0;
      while (i < inputs.size() && ++pick[i] == choices[i].size()) {
        pick[i] = 0;
        ++i;
      }
      if (i == inputs.size())
        break;
    }
  }
  return out;
}

} // namespace fmr
