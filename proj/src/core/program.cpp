//===- program.cpp - Function block program graphs ------------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/program.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <queue>
#include <sstream>

namespace fmr {

namespace {

struct Tok {
  std::string text;
  int col = 0;
};

std::vector<Tok> tokenize(std::string_view line) {
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#')
      break;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    toks.push_back({std::string(line.substr(start, i - start)),
                    static_cast<int>(start) + 1});
  }
  return toks;
}

bool is_identifier(std::string_view s) {
  if (s.empty())
    return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<SignalType> type_from_string(std::string_view s) {
  if (s == "real")
    return SignalType::Real;
  if (s == "bool")
    return SignalType::Bool;
  return std::nullopt;
}

std::string render_threshold(double k) {
  std::ostringstream os;
  os.precision(17);
  os << k;
  return os.str();
}

} // namespace

std::string_view to_string(VarRole role) {
  switch (role) {
  case VarRole::Input:
    return "input";
  case VarRole::Internal:
    return "internal";
  case VarRole::Output:
    return "output";
  }
  return "?";
}

int ProgramGraph::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name)
      return static_cast<int>(i);
  return -1;
}

std::vector<int> ProgramGraph::input_vars() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].role == VarRole::Input)
      out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> ProgramGraph::output_vars() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].role == VarRole::Output)
      out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> ProgramGraph::cone_blocks(int var) const {
  std::vector<bool> seen(blocks_.size(), false);
  std::vector<int> stack;
  if (writer_[var] >= 0)
    stack.push_back(writer_[var]);
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    if (seen[b])
      continue;
    seen[b] = true;
    for (int in : blocks_[b].inputs)
      if (writer_[in] >= 0)
        stack.push_back(writer_[in]);
  }
  std::vector<int> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (seen[b])
      out.push_back(static_cast<int>(b));
  return out;
}

std::vector<int> ProgramGraph::cone_inputs(int var) const {
  std::vector<bool> in_cone(vars_.size(), false);
  if (writer_[var] < 0) {
    in_cone[var] = true; // an input depends on itself
  } else {
    for (int b : cone_blocks(var))
      for (int in : blocks_[b].inputs)
        in_cone[in] = true;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (in_cone[i] && vars_[i].role == VarRole::Input)
      out.push_back(static_cast<int>(i));
  return out;
}

std::string ProgramGraph::render() const {
  std::ostringstream os;
  os << "fmrprog v1\n";
  for (VarRole role : {VarRole::Input, VarRole::Internal, VarRole::Output})
    for (const Variable &v : vars_)
      if (v.role == role)
        os << to_string(role) << ' ' << v.name << ' ' << to_string(v.type)
           << '\n';
  for (const BlockInstance &b : blocks_) {
    os << "block " << b.id << ' ' << b.kind;
    for (int in : b.inputs)
      os << ' ' << vars_[in].name;
    os << " -> " << vars_[b.output].name;
    if (b.threshold)
      os << " K=" << render_threshold(*b.threshold);
    os << '\n';
  }
  return os.str();
}

ProgramGraph parse_program(std::string_view text, const Catalog &catalog) {
  ProgramGraph prog;
  std::map<std::string, int, std::less<>> var_by_name;
  std::map<std::string, int, std::less<>> block_by_id;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Tok> toks = tokenize(line);
    if (toks.empty())
      continue;

    if (!saw_header) {
      if (toks.size() != 2 || toks[0].text != "fmrprog")
        throw ParseError("expected header line 'fmrprog v1'", lineno,
                         toks[0].col);
      if (toks[1].text != "v1")
        throw ParseError("unsupported program format version '" +
                             toks[1].text + "'",
                         lineno, toks[1].col);
      saw_header = true;
      continue;
    }

    const std::string &dir = toks[0].text;
    if (dir == "input" || dir == "internal" || dir == "output") {
      if (toks.size() != 3)
        throw ParseError("expected '" + dir + " <name> <real|bool>'", lineno,
                         toks[0].col);
      if (!is_identifier(toks[1].text))
        throw ParseError("invalid variable name '" + toks[1].text + "'",
                         lineno, toks[1].col);
      auto ty = type_from_string(toks[2].text);
      if (!ty)
        throw ParseError("unknown signal type '" + toks[2].text +
                             "' (expected real or bool)",
                         lineno, toks[2].col);
      if (var_by_name.count(toks[1].text))
        throw ParseError("variable '" + toks[1].text + "' is already declared",
                         lineno, toks[1].col);
      Variable v;
      v.name = toks[1].text;
      v.type = *ty;
      v.role = dir == "input"  ? VarRole::Input
               : dir == "output" ? VarRole::Output
                                 : VarRole::Internal;
      v.line = lineno;
      var_by_name.emplace(v.name, static_cast<int>(prog.vars_.size()));
      prog.vars_.push_back(std::move(v));
      continue;
    }

    if (dir == "block") {
      if (toks.size() < 3)
        throw ParseError(
            "expected 'block <id> <Kind> <inputs...> -> <output> [K=<num>]'",
            lineno, toks[0].col);
      if (!is_identifier(toks[1].text))
        throw ParseError("invalid block id '" + toks[1].text + "'", lineno,
                         toks[1].col);
      if (block_by_id.count(toks[1].text))
        throw ParseError("block id '" + toks[1].text + "' is already used",
                         lineno, toks[1].col);

      BlockInstance blk;
      blk.id = toks[1].text;
      blk.kind = toks[2].text;
      blk.line = lineno;
      const BlockType *type = catalog.find(blk.kind);
      if (!type)
        throw ParseError("unknown block kind '" + blk.kind + "'", lineno,
                         toks[2].col);

      std::size_t arrow = 3;
      while (arrow < toks.size() && toks[arrow].text != "->")
        ++arrow;
      if (arrow == toks.size())
        throw ParseError("expected '->' before the output variable", lineno,
                         toks.back().col);

      auto resolve_var = [&](const Tok &tok) {
        auto it = var_by_name.find(tok.text);
        if (it == var_by_name.end())
          throw ParseError("unknown variable '" + tok.text + "'", lineno,
                           tok.col);
        return it->second;
      };

      if (arrow - 3 != type->arity())
        throw ParseError("kind '" + blk.kind + "' takes " +
                             std::to_string(type->arity()) +
                             " input(s), got " + std::to_string(arrow - 3),
                         lineno, toks[2].col);
      for (std::size_t i = 3; i < arrow; ++i) {
        int v = resolve_var(toks[i]);
        SignalType want = type->in_types[i - 3];
        if (prog.vars_[v].type != want)
          throw ParseError("input " + std::to_string(i - 2) + " of kind '" +
                               blk.kind + "' must be " + to_string(want) +
                               ", variable '" + toks[i].text + "' is " +
                               to_string(prog.vars_[v].type),
                           lineno, toks[i].col);
        blk.inputs.push_back(v);
      }

      if (arrow + 1 >= toks.size())
        throw ParseError("expected an output variable after '->'", lineno,
                         toks[arrow].col);
      blk.output = resolve_var(toks[arrow + 1]);
      const Variable &out_var = prog.vars_[blk.output];
      if (out_var.type != type->out_type)
        throw ParseError("kind '" + blk.kind + "' assigns a " +
                             to_string(type->out_type) + " value, variable '" +
                             out_var.name + "' is " + to_string(out_var.type),
                         lineno, toks[arrow + 1].col);
      if (out_var.role == VarRole::Input)
        throw ParseError("cannot assign to input variable '" + out_var.name +
                             "'",
                         lineno, toks[arrow + 1].col);

      for (std::size_t i = arrow + 2; i < toks.size(); ++i) {
        const Tok &tok = toks[i];
        if (tok.text.rfind("K=", 0) == 0) {
          if (blk.threshold)
            throw ParseError("duplicate K= parameter", lineno, tok.col);
          std::string_view num{tok.text};
          num.remove_prefix(2);
          double k = 0;
          auto [ptr, ec] =
              std::from_chars(num.data(), num.data() + num.size(), k);
          if (ec != std::errc{} || ptr != num.data() + num.size())
            throw ParseError("invalid threshold '" + tok.text + "'", lineno,
                             tok.col);
          blk.threshold = k;
          continue;
        }
        throw ParseError("unexpected token '" + tok.text + "'", lineno,
                         tok.col);
      }
      if (type->takes_threshold && !blk.threshold)
        throw ParseError("kind '" + blk.kind + "' requires a K=<num> threshold",
                         lineno, toks[2].col);
      if (!type->takes_threshold && blk.threshold)
        throw ParseError("kind '" + blk.kind + "' does not take a threshold",
                         lineno, toks[2].col);

      block_by_id.emplace(blk.id, static_cast<int>(prog.blocks_.size()));
      prog.blocks_.push_back(std::move(blk));
      continue;
    }

    throw ParseError("unexpected directive '" + dir +
                         "' (expected input, internal, output, or block)",
                     lineno, toks[0].col);
  }

  if (!saw_header)
    throw ParseError("empty program: expected header line 'fmrprog v1'", 1, 1);

  // Wiring: every non-input variable is assigned exactly once.
  prog.writer_.assign(prog.vars_.size(), -1);
  for (std::size_t b = 0; b < prog.blocks_.size(); ++b) {
    int out = prog.blocks_[b].output;
    if (prog.writer_[out] >= 0)
      throw ParseError("variable '" + prog.vars_[out].name +
                           "' is assigned by both block '" +
                           prog.blocks_[prog.writer_[out]].id +
                           "' and block '" + prog.blocks_[b].id + "'",
                       prog.blocks_[b].line, 1);
    prog.writer_[out] = static_cast<int>(b);
  }
  for (std::size_t v = 0; v < prog.vars_.size(); ++v)
    if (prog.vars_[v].role != VarRole::Input && prog.writer_[v] < 0)
      throw ParseError(std::string(to_string(prog.vars_[v].role)) +
                           " variable '" + prog.vars_[v].name +
                           "' is never assigned by a block",
                       prog.vars_[v].line, 1);

  // Dependency order. Kahn's algorithm with an id-ordered ready queue makes
  // the result deterministic; leftover blocks mean a cycle.
  std::vector<int> indegree(prog.blocks_.size(), 0);
  std::vector<std::vector<int>> consumers(prog.blocks_.size());
  for (std::size_t b = 0; b < prog.blocks_.size(); ++b)
    for (int in : prog.blocks_[b].inputs)
      if (prog.writer_[in] >= 0) {
        consumers[prog.writer_[in]].push_back(static_cast<int>(b));
        ++indegree[b];
      }
  auto id_greater = [&](int a, int b) {
    return prog.blocks_[a].id > prog.blocks_[b].id;
  };
  std::priority_queue<int, std::vector<int>, decltype(id_greater)> ready(
      id_greater);
  for (std::size_t b = 0; b < prog.blocks_.size(); ++b)
    if (indegree[b] == 0)
      ready.push(static_cast<int>(b));
  while (!ready.empty()) {
    int b = ready.top();
    ready.pop();
    prog.topo_.push_back(b);
    for (int next : consumers[b])
      if (--indegree[next] == 0)
        ready.push(next);
  }
  if (prog.topo_.size() != prog.blocks_.size()) {
    int first = -1;
    for (std::size_t b = 0; b < prog.blocks_.size(); ++b)
      if (indegree[b] > 0 &&
          (first < 0 || prog.blocks_[b].id < prog.blocks_[first].id))
        first = static_cast<int>(b);
    throw ParseError("dependency cycle through block '" +
                         prog.blocks_[first].id + "'",
                     prog.blocks_[first].line, 1);
  }

  return prog;
}

} // namespace fmr
