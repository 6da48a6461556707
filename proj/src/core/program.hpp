//===- program.hpp - Function block program graphs ------------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A program is a set of typed variables plus a set of block instances wired
// through them: every block reads one or two variables and assigns exactly
// one. Input variables are never assigned, internal and output variables are
// assigned exactly once, and the dataflow graph is acyclic, so a program
// denotes a function from input values to the values of all assigned
// variables.
//
// Programs are written in a small line-based text format (`fmrprog v1`):
//
//   fmrprog v1
//   input  i1 real
//   input  i2 real
//   internal w real
//   output o  bool
//   block b1 Avg  i1 i2 -> w
//   block b2 Gcom w -> o K=5
//
// `#` starts a comment. Parsing validates the wiring against a catalog and
// reports positioned diagnostics for malformed input.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_PROGRAM_HPP
#define FMR_CORE_PROGRAM_HPP

#include "core/catalog.hpp"
#include "core/modes.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmr {

enum class VarRole : std::uint8_t { Input, Internal, Output };

std::string_view to_string(VarRole role);

struct Variable {
  std::string name;
  SignalType type = SignalType::Real;
  VarRole role = VarRole::Internal;
  int line = 0; // declaration line, for diagnostics
};

/// One block occurrence: `block <id> <Kind> <ins...> -> <out> [K=<num>]`.
struct BlockInstance {
  std::string id;
  std::string kind;
  std::vector<int> inputs; // variable indices, in port order
  int output = -1;         // variable index
  std::optional<double> threshold;
  int line = 0;
};

/// Validated, acyclic dataflow graph over typed variables.
class ProgramGraph {
public:
  const std::vector<Variable> &variables() const { return vars_; }
  const std::vector<BlockInstance> &blocks() const { return blocks_; }

  const Variable &variable(int idx) const { return vars_[idx]; }
  const BlockInstance &block(int idx) const { return blocks_[idx]; }

  /// Index of a variable by name, or -1.
  int var_index(std::string_view name) const;

  /// Block assigning the variable, or -1 for inputs.
  int writer_of(int var) const { return writer_[var]; }

  std::vector<int> input_vars() const;  // declaration order
  std::vector<int> output_vars() const; // declaration order

  /// Blocks in dependency order (readers after writers). Deterministic:
  /// ties are broken by block id.
  const std::vector<int> &topo_order() const { return topo_; }

  /// Blocks the target variable transitively depends on.
  std::vector<int> cone_blocks(int var) const;
  /// Input variables the target variable transitively depends on, in
  /// declaration order.
  std::vector<int> cone_inputs(int var) const;

  /// Canonical `fmrprog v1` text (inputs, internals, outputs, then blocks).
  /// Parsing the result reproduces the same graph.
  std::string render() const;

private:
  friend ProgramGraph parse_program(std::string_view text,
                                    const Catalog &catalog);

  std::vector<Variable> vars_;
  std::vector<BlockInstance> blocks_;
  std::vector<int> writer_; // per variable, block index or -1
  std::vector<int> topo_;
};

/// Parses and validates a program against the catalog. Throws ParseError
/// with a 1-based position on any syntax or wiring error (unknown kind,
/// arity or type mismatch, assignment to an input, double assignment,
/// unassigned internal/output, dependency cycle).
ProgramGraph parse_program(std::string_view text, const Catalog &catalog);

} // namespace fmr

#endif // FMR_CORE_PROGRAM_HPP
