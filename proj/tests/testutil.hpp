//===- testutil.hpp - Shared helpers for the test suite -------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Program builders and random generators shared by the unit tests and the
// acceptance suite:
//
//   * random_tree_program - programs on which table composition is exact,
//     so backward analysis must agree with brute force (see the generation
//     rules below).
//   * random_chain / reference_chain_backward - two-block chains and an
//     independent substitution-based reimplementation of their backward
//     analysis.
//   * random_dnf - scenario formulas for simplification checks.
//   * scale_program_text - a large synthetic multi-cone program.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_TESTS_TESTUTIL_HPP
#define FMR_TESTS_TESTUTIL_HPP

#include "core/catalog.hpp"
#include "core/engine.hpp"
#include "core/oracle.hpp"
#include "core/program.hpp"

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fmrtest {

using namespace fmr;

inline ProgramGraph parse(const std::string &text) {
  return parse_program(text, Catalog::builtins());
}

inline Scenario
make_scenario(std::initializer_list<std::pair<int, FailureMode>> lits) {
  Scenario s;
  for (auto [var, mode] : lits)
    s.unify({var, mode});
  return s;
}

/// Scenario sets as (variable name, mode letter) pairs, for comparing
/// formulas across differently indexed graphs.
inline std::set<std::vector<std::pair<std::string, char>>>
named_scenarios(const ProgramGraph &g, const std::vector<Scenario> &scenarios) {
  std::set<std::vector<std::pair<std::string, char>>> out;
  for (const Scenario &sc : scenarios) {
    std::vector<std::pair<std::string, char>> lits;
    for (const ModeLiteral &lit : sc.literals)
      lits.emplace_back(g.variable(lit.var).name, mode_letter(lit.mode));
    std::sort(lits.begin(), lits.end());
    out.insert(std::move(lits));
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Random tree programs with exact table composition.
//
// Backward analysis composes block tables, which is exact only when every
// intermediate value can realize each of its failure modes with any
// concrete (reported, actual) pair the downstream block may need. The
// generator therefore enforces:
//
//   * tree wiring: every variable is read at most once (shared
//     subexpressions make the analysis a strict over-approximation);
//   * arguments of Abs and of comparators are "full range" reals: an input
//     variable, or Avg/Add/Sub with at least one full-range argument (the
//     Abs output covers only half the number line, so Gcom/Lcom/Abs on top
//     of it could claim transitions that cannot happen);
//   * arguments of And/Or are "full" booleans: an input variable, a
//     comparator, or Not of a full boolean. And/Or outputs pin the
//     concrete values behind a match mode (e.g. And over (f,m) can only
//     match as false/false), so feeding them into another gate could again
//     claim impossible transitions. They may only feed the program output,
//     possibly through a final Not.
//===----------------------------------------------------------------------===//

struct TreeGenLimits {
  int max_blocks = 6;
  int max_inputs = 4;
};

class TreeProgramGen {
public:
  explicit TreeProgramGen(std::mt19937_64 &rng,
                          TreeGenLimits limits = TreeGenLimits{})
      : rng_(rng) {
    blocks_left_ = 1 + pick(limits.max_blocks);
    inputs_left_ = 1 + pick(limits.max_inputs);
  }

  /// Emits one program; the root is always a block.
  std::string generate() {
    bool bool_root = pick(100) < 60;
    std::string root = bool_root ? gen_bool(/*need_full=*/false, 0,
                                            /*allow_leaf=*/false)
                                 : gen_real(/*need_full=*/false, 0,
                                            /*allow_leaf=*/false);
    std::ostringstream os;
    os << "fmrprog v1\n";
    for (const auto &[name, ty] : inputs_)
      os << "input " << name << ' ' << to_string(ty) << '\n';
    for (const auto &[name, ty] : internals_)
      if (name != root)
        os << "internal " << name << ' ' << to_string(ty) << '\n';
    for (const auto &[name, ty] : internals_)
      if (name == root)
        os << "output " << name << ' ' << to_string(ty) << '\n';
    for (const std::string &line : blocks_)
      os << line << '\n';
    return os.str();
  }

private:
  int pick(int n) {
    return static_cast<int>(
        std::uniform_int_distribution<int>(0, n - 1)(rng_));
  }

  double pick_threshold() {
    static const double ks[] = {-1.0, 0.0, 1.0};
    return ks[pick(3)];
  }

  std::string fresh_input(SignalType ty) {
    --inputs_left_;
    std::string name = "in" + std::to_string(inputs_.size() + 1);
    inputs_.emplace_back(name, ty);
    return name;
  }

  std::string fresh_internal(SignalType ty) {
    std::string name = "v" + std::to_string(internals_.size() + 1);
    internals_.emplace_back(name, ty);
    return name;
  }

  std::string emit(const std::string &kind, const std::vector<std::string> &ins,
                   SignalType out_ty, std::optional<double> k = {}) {
    --blocks_left_;
    std::string out = fresh_internal(out_ty);
    std::ostringstream os;
    os << "block b" << ++block_seq_ << ' ' << kind;
    for (const std::string &in : ins)
      os << ' ' << in;
    os << " -> " << out;
    if (k) {
      std::ostringstream kv;
      kv.precision(17);
      kv << *k;
      os << " K=" << kv.str();
    }
    blocks_.push_back(os.str());
    return out;
  }

  bool leaf_now(int depth, bool allow_leaf) {
    if (!allow_leaf)
      return false;
    if (blocks_left_ <= 0 || inputs_left_ <= 0)
      return true;
    return pick(100) < 25 + depth * 25;
  }

  std::string gen_real(bool need_full, int depth, bool allow_leaf) {
    bool can_binary = blocks_left_ >= 1 && inputs_left_ >= 2;
    bool can_abs = !need_full && blocks_left_ >= 2 && inputs_left_ >= 1;
    // With no room for a block the value must be an input variable. A
    // forced leaf may overdraw the budget or leave the root blockless;
    // random_tree_program rejects and regenerates in those cases.
    if (leaf_now(depth, allow_leaf) || (!can_binary && !can_abs)) {
      if (allow_leaf && inputs_left_ > 0)
        return fresh_input(SignalType::Real);
      if (!can_binary)
        return fresh_input(SignalType::Real);
    }
    if (can_abs && (!can_binary || pick(100) < 25)) {
      std::string arg = gen_real(/*need_full=*/true, depth + 1, true);
      return emit("Abs", {arg}, SignalType::Real);
    }
    static const char *kinds[] = {"Avg", "Add", "Sub"};
    std::string kind = kinds[pick(3)];
    bool full_first = pick(2) == 0;
    std::string a, b;
    if (need_full) {
      // At least one argument keeps the full range.
      if (full_first) {
        a = gen_real(true, depth + 1, true);
        b = gen_real(false, depth + 1, true);
      } else {
        a = gen_real(false, depth + 1, true);
        b = gen_real(true, depth + 1, true);
      }
    } else {
      a = gen_real(false, depth + 1, true);
      b = gen_real(false, depth + 1, true);
    }
    return emit(kind, {a, b}, SignalType::Real);
  }

  // Full booleans: input, comparator, or Not of a full boolean.
  std::string gen_full_bool(int depth, bool allow_leaf) {
    bool can_block = blocks_left_ >= 1 && inputs_left_ >= 1;
    // The budget may be overdrawn slightly here; random_tree_program
    // rejects and regenerates in that case.
    if (leaf_now(depth, allow_leaf) || !can_block)
      return fresh_input(SignalType::Bool);
    int choice = pick(100);
    if (choice < 35 && blocks_left_ >= 2) {
      std::string arg = gen_full_bool(depth + 1, true);
      return emit("Not", {arg}, SignalType::Bool);
    }
    std::string kind = pick(2) == 0 ? "Gcom" : "Lcom";
    std::string arg = gen_real(/*need_full=*/true, depth + 1, true);
    return emit(kind, {arg}, SignalType::Bool, pick_threshold());
  }

  std::string gen_bool(bool need_full, int depth, bool allow_leaf) {
    if (need_full)
      return gen_full_bool(depth, allow_leaf);
    bool can_gate = blocks_left_ >= 1 && inputs_left_ >= 2;
    bool can_not = blocks_left_ >= 2;
    if (can_gate && pick(100) < 55) {
      std::string kind = pick(2) == 0 ? "And" : "Or";
      std::string a = gen_full_bool(depth + 1, true);
      std::string b = gen_full_bool(depth + 1, true);
      return emit(kind, {a, b}, SignalType::Bool);
    }
    if (can_not && pick(100) < 30) {
      std::string arg = gen_bool(false, depth + 1, true);
      return emit("Not", {arg}, SignalType::Bool);
    }
    return gen_full_bool(depth, allow_leaf);
  }

  std::mt19937_64 &rng_;
  int blocks_left_ = 0;
  int inputs_left_ = 0;
  int block_seq_ = 0;
  std::vector<std::pair<std::string, SignalType>> inputs_;
  std::vector<std::pair<std::string, SignalType>> internals_;
  std::vector<std::string> blocks_;
};

/// Random tree program within the limits; regenerates until the block and
/// input budgets hold and at least one block exists.
inline std::string random_tree_program(std::mt19937_64 &rng,
                                       TreeGenLimits limits = TreeGenLimits{}) {
  for (;;) {
    TreeProgramGen gen(rng, limits);
    std::string text = gen.generate();
    ProgramGraph g = parse(text);
    if (g.blocks().empty())
      continue;
    if (static_cast<int>(g.blocks().size()) > limits.max_blocks)
      continue;
    if (static_cast<int>(g.input_vars().size()) > limits.max_inputs)
      continue;
    return text;
  }
}

//===----------------------------------------------------------------------===//
// Two-block chains.
//===----------------------------------------------------------------------===//

struct ChainSpec {
  std::string kind1; // writes w
  std::string kind2; // reads w at `port`
  int port = 0;
  double k1 = 1.0;
  double k2 = 1.0;

  std::string text(const Catalog &catalog) const {
    const BlockType &t1 = catalog.at(kind1);
    const BlockType &t2 = catalog.at(kind2);
    std::ostringstream os;
    os << "fmrprog v1\n";
    for (std::size_t i = 0; i < t1.arity(); ++i)
      os << "input x" << (i + 1) << ' ' << to_string(t1.in_types[i]) << '\n';
    if (t2.arity() == 2)
      os << "input z " << to_string(t2.in_types[1 - port]) << '\n';
    os << "internal w " << to_string(t1.out_type) << '\n';
    os << "output o " << to_string(t2.out_type) << '\n';
    os << "block f " << kind1;
    for (std::size_t i = 0; i < t1.arity(); ++i)
      os << " x" << (i + 1);
    os << " -> w";
    if (t1.takes_threshold)
      os << " K=" << k1;
    os << '\n';
    os << "block g " << kind2 << ' ';
    if (t2.arity() == 1)
      os << "w";
    else if (port == 0)
      os << "w z";
    else
      os << "z w";
    os << " -> o";
    if (t2.takes_threshold)
      os << " K=" << k2;
    os << '\n';
    return os.str();
  }
};

/// Uniformly random type-correct chain over the built-in kinds.
inline ChainSpec random_chain(std::mt19937_64 &rng, const Catalog &catalog) {
  static const double ks[] = {-1.0, 0.0, 1.0};
  std::vector<ChainSpec> combos;
  for (const std::string &k1 : catalog.names())
    for (const std::string &k2 : catalog.names()) {
      const BlockType &t1 = catalog.at(k1);
      const BlockType &t2 = catalog.at(k2);
      for (int port = 0; port < static_cast<int>(t2.arity()); ++port)
        if (t2.in_types[port] == t1.out_type)
          combos.push_back({k1, k2, port, 1.0, 1.0});
    }
  std::uniform_int_distribution<std::size_t> d(0, combos.size() - 1);
  ChainSpec spec = combos[d(rng)];
  std::uniform_int_distribution<int> kd(0, 2);
  spec.k1 = ks[kd(rng)];
  spec.k2 = ks[kd(rng)];
  return spec;
}

/// Backward analysis of a chain by direct table substitution: expand the
/// target through the second block's table, then push the literal on w
/// through the first block's table. Independent of the engine's worklist.
inline std::set<std::vector<std::pair<std::string, char>>>
reference_chain_backward(const ChainSpec &spec, const Catalog &catalog,
                         FailureMode target, FmbVariant variant,
                         bool include_uncertain) {
  Fmb f1 = fmb_lookup(catalog, spec.kind1, variant);
  Fmb f2 = fmb_lookup(catalog, spec.kind2, variant);

  std::vector<std::vector<std::pair<std::string, char>>> raw;
  for (const ModeTuple &t2 : f2.inverse(target, include_uncertain)) {
    FailureMode w_mode = t2[static_cast<std::size_t>(spec.port)];
    std::optional<std::pair<std::string, char>> other;
    if (t2.size == 2)
      other = {"z", mode_letter(t2[1 - static_cast<std::size_t>(spec.port)])};
    for (const ModeTuple &t1 : f1.inverse(w_mode, include_uncertain)) {
      std::vector<std::pair<std::string, char>> lits;
      for (std::uint8_t i = 0; i < t1.size; ++i)
        lits.emplace_back("x" + std::to_string(i + 1), mode_letter(t1[i]));
      if (other)
        lits.push_back(*other);
      std::sort(lits.begin(), lits.end());
      raw.push_back(std::move(lits));
    }
  }

  // Same normal form as the engine: dedupe plus absorption.
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  std::set<std::vector<std::pair<std::string, char>>> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < raw.size() && !absorbed; ++j)
      absorbed = j != i && std::includes(raw[i].begin(), raw[i].end(),
                                         raw[j].begin(), raw[j].end());
    if (!absorbed)
      out.insert(raw[i]);
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Random DNF formulas over abstract variables.
//===----------------------------------------------------------------------===//

struct DnfCase {
  std::vector<SignalType> types; // per variable
  std::vector<Scenario> scenarios;
};

inline DnfCase random_dnf(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> nvars_d(1, 6);
  DnfCase c;
  int nvars = nvars_d(rng);
  for (int v = 0; v < nvars; ++v)
    c.types.push_back(std::uniform_int_distribution<int>(0, 1)(rng) == 0
                          ? SignalType::Real
                          : SignalType::Bool);
  int nsc = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int s = 0; s < nsc; ++s) {
    Scenario sc;
    for (int v = 0; v < nvars; ++v) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) != 0)
        continue; // leave the variable unmentioned
      std::span<const FailureMode> legal = legal_modes(c.types[v]);
      sc.unify({v, legal[std::uniform_int_distribution<std::size_t>(
                       0, legal.size() - 1)(rng)]});
    }
    c.scenarios.push_back(std::move(sc));
  }
  return c;
}

/// All total assignments satisfying the DNF (some scenario's literal set is
/// contained in the assignment).
inline std::set<std::vector<FailureMode>>
dnf_satisfying_set(const DnfCase &c, const std::vector<Scenario> &scenarios) {
  std::set<std::vector<FailureMode>> out;
  std::vector<std::size_t> pick(c.types.size(), 0);
  for (;;) {
    std::vector<FailureMode> assign(c.types.size());
    for (std::size_t v = 0; v < c.types.size(); ++v)
      assign[v] = legal_modes(c.types[v])[pick[v]];
    bool sat = false;
    for (const Scenario &sc : scenarios) {
      bool all = true;
      for (const ModeLiteral &lit : sc.literals)
        all = all && assign[static_cast<std::size_t>(lit.var)] == lit.mode;
      if (all) {
        sat = true;
        break;
      }
    }
    if (sat)
      out.insert(assign);
    std::size_t v = 0;
    while (v < c.types.size() &&
           ++pick[v] == legal_modes(c.types[v]).size()) {
      pick[v] = 0;
      ++v;
    }
    if (v == c.types.size())
      break;
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Synthetic scale program.
//===----------------------------------------------------------------------===//

/// `cones` independent alarm functions over a shared pool of `inputs` real
/// sensors. Each cone is a deep arithmetic chain (with fan-out onto a
/// mid-chain tap and an occasional Abs) feeding two comparators and a
/// small gate network with one boolean output.
inline std::string scale_program_text(int cones = 25, int chain_len = 77,
                                      int inputs = 100) {
  std::ostringstream os;
  os << "fmrprog v1\n";
  for (int i = 0; i < inputs; ++i)
    os << "input in" << i << " real\n";

  static const char *arith[] = {"Add", "Sub", "Avg"};
  for (int c = 0; c < cones; ++c) {
    auto in = [&](int j) {
      return "in" + std::to_string((4 * c + j) % inputs);
    };
    auto w = [&](int i) {
      return "w_" + std::to_string(c) + "_" + std::to_string(i);
    };
    for (int i = 0; i < chain_len; ++i)
      os << "internal " << w(i) << " real\n";
    os << "internal v1_" << c << " bool\n";
    os << "internal v2_" << c << " bool\n";
    os << "internal n1_" << c << " bool\n";
    os << "internal a1_" << c << " bool\n";
    os << "output out" << c << " bool\n";

    os << "block c" << c << "_0 Avg " << in(0) << ' ' << in(1) << " -> "
       << w(0) << '\n';
    for (int i = 1; i < chain_len; ++i) {
      if (i % 13 == 0)
        os << "block c" << c << "_" << i << " Abs " << w(i - 1) << " -> "
           << w(i) << '\n';
      else
        os << "block c" << c << "_" << i << ' ' << arith[i % 3] << ' '
           << w(i - 1) << ' ' << in(2 + (i % 4)) << " -> " << w(i) << '\n';
    }
    int mid = chain_len / 2;
    os << "block c" << c << "_ga Gcom " << w(chain_len - 1) << " -> v1_" << c
       << " K=1\n";
    os << "block c" << c << "_gb Lcom " << w(mid) << " -> v2_" << c
       << " K=-1\n";
    os << "block c" << c << "_nt Not v1_" << c << " -> n1_" << c << '\n';
    os << "block c" << c << "_an And n1_" << c << " v2_" << c << " -> a1_"
       << c << '\n';
    os << "block c" << c << "_or Or a1_" << c << " v2_" << c << " -> out"
       << c << '\n';
  }
  return os.str();
}

} // namespace fmrtest

#endif // FMR_TESTS_TESTUTIL_HPP
