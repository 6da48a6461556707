//===- catalog.cpp - Function blocks and their failure mode tables --------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/catalog.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace fmr {

namespace {

// The built-in tables, in the same text format accepted for user kinds.
// Rows are (input modes -> output mode); "a" is every mode of a real
// output; a trailing "u" marks the row as an uncertain outcome.
constexpr std::string_view kBuiltinTables = R"(fmb v1

kind Avg real real -> real
row l l -> l
row l m -> l
row l h -> a
row m l -> l
row m m -> m
row m h -> h
row h l -> a
row h m -> h
row h h -> h

kind Add real real -> real
row l l -> l
row l m -> l
row l h -> a
row m l -> l
row m m -> m
row m h -> h
row h l -> a
row h m -> h
row h h -> h

kind Sub real real -> real
row l l -> a
row l m -> l
row l h -> l
row m l -> h
row m m -> m
row m h -> l
row h l -> h
row h m -> h
row h h -> a

kind Abs real -> real
row l -> a
row m -> m
row h -> a

kind Gcom real -> bool
row l -> f
row l -> m
row m -> m
row h -> m
row h -> t

kind Lcom real -> bool
row l -> m
row l -> t
row m -> m
row h -> f
row h -> m

kind Not bool -> bool
row f -> t
row m -> m
row t -> f

kind And bool bool -> bool
row f f -> f
row f m -> f
row f m -> m
row f t -> m
row m f -> f
row m f -> m
row m m -> m
row m t -> m
row m t -> t u
row t f -> m
row t m -> m
row t m -> t u
row t t -> t

kind Or bool bool -> bool
row f f -> f
row f m -> f u
row f m -> m
row f t -> m
row m f -> f u
row m f -> m
row m m -> m
row m t -> m
row m t -> t
row t f -> m
row t m -> m
row t m -> t
row t t -> t
)";

struct BuiltinMeta {
  std::string_view name;
  Builtin builtin;
  bool takes_threshold;
};

constexpr BuiltinMeta kBuiltinMeta[] = {
    {"Avg", Builtin::Avg, false}, {"Add", Builtin::Add, false},
    {"Sub", Builtin::Sub, false}, {"Abs", Builtin::Abs, false},
    {"Gcom", Builtin::Gcom, true}, {"Lcom", Builtin::Lcom, true},
    {"Not", Builtin::Not, false}, {"And", Builtin::And, false},
    {"Or", Builtin::Or, false},
};

struct Tok {
  std::string text;
  int col = 0; // 1-based
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

double get_real(const Value &v, const char *what) {
  if (!std::holds_alternative<double>(v))
    throw Error(std::string(what) + " expects a real input");
  return std::get<double>(v);
}

bool get_bool(const Value &v, const char *what) {
  if (!std::holds_alternative<bool>(v))
    throw Error(std::string(what) + " expects a bool input");
  return std::get<bool>(v);
}

} // namespace

std::string_view builtin_name(Builtin b) {
  return kBuiltinMeta[static_cast<std::size_t>(b)].name;
}

bool ModeTuple::operator<(const ModeTuple &o) const {
  if (size != o.size)
    return size < o.size;
  for (std::uint8_t i = 0; i < size; ++i)
    if (modes[i] != o.modes[i])
      return mode_rank(modes[i]) < mode_rank(o.modes[i]);
  return false;
}

std::string ModeTuple::render() const {
  std::string out = "(";
  for (std::uint8_t i = 0; i < size; ++i) {
    if (i)
      out.push_back(',');
    out.push_back(mode_letter(modes[i]));
  }
  out.push_back(')');
  return out;
}

bool FmbRow::operator<(const FmbRow &o) const {
  if (!(inputs == o.inputs))
    return inputs < o.inputs;
  if (output != o.output)
    return mode_rank(output) < mode_rank(o.output);
  return uncertain < o.uncertain;
}

std::string_view to_string(FmbVariant v) {
  return v == FmbVariant::Theoretical ? "theoretical" : "practical";
}

std::optional<FmbVariant> variant_from_string(std::string_view s) {
  if (s == "theoretical")
    return FmbVariant::Theoretical;
  if (s == "practical")
    return FmbVariant::Practical;
  return std::nullopt;
}

Fmb::Fmb(std::vector<SignalType> in_types, SignalType out_type,
         std::vector<FmbRow> rows)
    : in_types_(std::move(in_types)), out_type_(out_type),
      rows_(std::move(rows)) {
  if (in_types_.empty() || in_types_.size() > 2)
    throw Error("failure mode tables support one or two inputs, got " +
                std::to_string(in_types_.size()));
  for (const FmbRow &row : rows_) {
    check_tuple(row.inputs);
    if (!mode_legal_for(row.output, out_type_))
      throw Error(std::string("output mode '") + mode_letter(row.output) +
                  "' is not legal for " + to_string(out_type_) + " signals");
  }
  std::sort(rows_.begin(), rows_.end());
  rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

void Fmb::check_tuple(const ModeTuple &inputs) const {
  if (inputs.size != in_types_.size())
    throw Error("input mode tuple has " + std::to_string(inputs.size) +
                " entries, block takes " + std::to_string(in_types_.size()));
  for (std::uint8_t i = 0; i < inputs.size; ++i)
    if (!mode_legal_for(inputs[i], in_types_[i]))
      throw Error(std::string("input mode '") + mode_letter(inputs[i]) +
                  "' at position " + std::to_string(i + 1) +
                  " is not legal for " + to_string(in_types_[i]) + " signals");
}

Fmb Fmb::with_variant(FmbVariant v) const {
  if (v == FmbVariant::Theoretical)
    return *this;
  std::vector<FmbRow> kept;
  std::copy_if(rows_.begin(), rows_.end(), std::back_inserter(kept),
               [](const FmbRow &row) { return !row.uncertain; });
  return Fmb(in_types_, out_type_, std::move(kept));
}

ForwardModes Fmb::forward(const ModeTuple &inputs,
                          bool include_uncertain) const {
  check_tuple(inputs);
  ForwardModes out{ModeSet::none(out_type_), ModeSet::none(out_type_)};
  for (const FmbRow &row : rows_) {
    if (!(row.inputs == inputs))
      continue;
    if (row.uncertain)
      out.uncertain.insert(row.output);
    if (!row.uncertain || include_uncertain)
      out.modes.insert(row.output);
  }
  return out;
}

std::vector<ModeTuple> Fmb::inverse(FailureMode output,
                                    bool include_uncertain) const {
  if (!mode_legal_for(output, out_type_))
    throw Error(std::string("mode '") + mode_letter(output) +
                "' is not legal for the block's " + to_string(out_type_) +
                " output");
  std::vector<ModeTuple> tuples;
  for (const FmbRow &row : rows_) {
    if (row.output != output || (row.uncertain && !include_uncertain))
      continue;
    if (tuples.empty() || !(tuples.back() == row.inputs))
      tuples.push_back(row.inputs);
  }
  return tuples;
}

std::vector<ModeTuple> Fmb::all_input_tuples() const {
  std::vector<ModeTuple> tuples;
  if (in_types_.size() == 1) {
    for (FailureMode a : legal_modes(in_types_[0]))
      tuples.push_back(ModeTuple::of(a));
    return tuples;
  }
  for (FailureMode a : legal_modes(in_types_[0]))
    for (FailureMode b : legal_modes(in_types_[1]))
      tuples.push_back(ModeTuple::of(a, b));
  return tuples;
}

Catalog Catalog::builtins() {
  static const Catalog cached = [] {
    Catalog c;
    c.load_table(kBuiltinTables);
    for (const BuiltinMeta &meta : kBuiltinMeta) {
      BlockType &type = c.types_.at(std::string(meta.name));
      type.builtin = meta.builtin;
      type.takes_threshold = meta.takes_threshold;
    }
    return c;
  }();
  return cached;
}

const BlockType &Catalog::at(std::string_view name) const {
  const BlockType *type = find(name);
  if (!type)
    throw Error("unknown block kind '" + std::string(name) + "'");
  return *type;
}

const BlockType *Catalog::find(std::string_view name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &it->second;
}

std::vector<std::string> Catalog::names() const {
  std::vector<std::string> out;
  out.reserve(types_.size());
  for (const auto &[name, type] : types_)
    out.push_back(name);
  return out;
}

void Catalog::load_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool saw_header = false;

  // Partially parsed kind; finalized when the next kind starts or at EOF.
  struct PendingKind {
    std::string name;
    std::vector<SignalType> in_types;
    SignalType out_type = SignalType::Real;
    std::vector<FmbRow> rows;
    int line = 0;
  };
  std::optional<PendingKind> pending;

  auto finish_kind = [&](PendingKind &kind) {
    Fmb fmb;
    try {
      fmb = Fmb(kind.in_types, kind.out_type, std::move(kind.rows));
    } catch (const Error &e) {
      throw ParseError("kind '" + kind.name + "': " + e.what(), kind.line, 1);
    }
    for (const ModeTuple &tuple : fmb.all_input_tuples())
      if (fmb.forward(tuple, /*include_uncertain=*/true).modes.empty())
        throw ParseError("kind '" + kind.name +
                             "': no rows for input combination " +
                             tuple.render(),
                         kind.line, 1);
    BlockType type;
    type.name = kind.name;
    type.in_types = kind.in_types;
    type.out_type = kind.out_type;
    type.fmb = std::move(fmb);
    if (!types_.emplace(type.name, std::move(type)).second)
      throw ParseError("block kind '" + kind.name + "' is already defined",
                       kind.line, 1);
  };

  auto parse_arrow_split = [&](const std::vector<Tok> &toks,
                               std::size_t begin) -> std::size_t {
    for (std::size_t i = begin; i < toks.size(); ++i)
      if (toks[i].text == "->")
        return i;
    throw ParseError("expected '->' before the output column", lineno,
                     toks.empty() ? 1 : toks.back().col);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Tok> toks = tokenize(line);
    if (toks.empty())
      continue;

    if (!saw_header) {
      if (toks.size() != 2 || toks[0].text != "fmb")
        throw ParseError("expected header line 'fmb v1'", lineno, toks[0].col);
      if (toks[1].text != "v1")
        throw ParseError("unsupported fmb format version '" + toks[1].text +
                             "'",
                         lineno, toks[1].col);
      saw_header = true;
      continue;
    }

    if (toks[0].text == "kind") {
      if (pending)
        finish_kind(*pending);
      pending.reset();
      if (toks.size() < 2 || !is_identifier(toks[1].text))
        throw ParseError("expected a block kind name after 'kind'", lineno,
                         toks.size() < 2 ? toks[0].col : toks[1].col);
      PendingKind kind;
      kind.name = toks[1].text;
      kind.line = lineno;
      std::size_t arrow = parse_arrow_split(toks, 2);
      for (std::size_t i = 2; i < arrow; ++i) {
        auto ty = type_from_string(toks[i].text);
        if (!ty)
          throw ParseError("unknown signal type '" + toks[i].text +
                               "' (expected real or bool)",
                           lineno, toks[i].col);
        kind.in_types.push_back(*ty);
      }
      if (kind.in_types.empty() || kind.in_types.size() > 2)
        throw ParseError("block kinds take one or two inputs", lineno,
                         toks[1].col);
      if (arrow + 1 >= toks.size())
        throw ParseError("expected an output signal type after '->'", lineno,
                         toks[arrow].col);
      auto out_ty = type_from_string(toks[arrow + 1].text);
      if (!out_ty)
        throw ParseError("unknown signal type '" + toks[arrow + 1].text +
                             "' (expected real or bool)",
                         lineno, toks[arrow + 1].col);
      if (arrow + 2 < toks.size())
        throw ParseError("unexpected token '" + toks[arrow + 2].text +
                             "' after the output type",
                         lineno, toks[arrow + 2].col);
      kind.out_type = *out_ty;
      pending = std::move(kind);
      continue;
    }

    if (toks[0].text == "row") {
      if (!pending)
        throw ParseError("'row' before any 'kind' line", lineno, toks[0].col);
      std::size_t arrow = parse_arrow_split(toks, 1);
      if (arrow - 1 != pending->in_types.size())
        throw ParseError("row has " + std::to_string(arrow - 1) +
                             " input modes, kind '" + pending->name +
                             "' takes " +
                             std::to_string(pending->in_types.size()),
                         lineno, toks[0].col);
      ModeTuple tuple;
      tuple.size = static_cast<std::uint8_t>(pending->in_types.size());
      for (std::size_t i = 1; i < arrow; ++i) {
        const Tok &tok = toks[i];
        auto mode = tok.text.size() == 1 ? mode_from_letter(tok.text[0])
                                         : std::nullopt;
        if (!mode || !mode_legal_for(*mode, pending->in_types[i - 1]))
          throw ParseError("invalid input mode '" + tok.text + "' for a " +
                               to_string(pending->in_types[i - 1]) + " signal",
                           lineno, tok.col);
        tuple.modes[i - 1] = *mode;
      }
      if (arrow + 1 >= toks.size())
        throw ParseError("expected an output mode after '->'", lineno,
                         toks[arrow].col);
      const Tok &out_tok = toks[arrow + 1];
      bool uncertain = false;
      if (arrow + 2 < toks.size()) {
        if (toks[arrow + 2].text != "u" || arrow + 3 < toks.size())
          throw ParseError("unexpected token after the output mode (only a "
                           "trailing 'u' marker is allowed)",
                           lineno, toks[arrow + 2].col);
        uncertain = true;
      }
      std::vector<FailureMode> outs;
      if (out_tok.text == "a" && pending->out_type == SignalType::Real) {
        outs.assign(legal_modes(SignalType::Real).begin(),
                    legal_modes(SignalType::Real).end());
      } else {
        auto mode = out_tok.text.size() == 1 ? mode_from_letter(out_tok.text[0])
                                             : std::nullopt;
        if (!mode || !mode_legal_for(*mode, pending->out_type))
          throw ParseError("invalid output mode '" + out_tok.text + "' for a " +
                               to_string(pending->out_type) + " signal",
                           lineno, out_tok.col);
        outs.push_back(*mode);
      }
      for (FailureMode out : outs)
        pending->rows.push_back({tuple, out, uncertain});
      continue;
    }

    throw ParseError("unexpected directive '" + toks[0].text +
                         "' (expected 'kind' or 'row')",
                     lineno, toks[0].col);
  }

  if (!saw_header)
    throw ParseError("empty table: expected header line 'fmb v1'", 1, 1);
  if (pending)
    finish_kind(*pending);
}

Fmb fmb_lookup(const Catalog &catalog, std::string_view kind, FmbVariant v) {
  return catalog.at(kind).fmb.with_variant(v);
}

Value eval_builtin(Builtin b, std::optional<double> threshold,
                   std::span<const Value> inputs) {
  auto expect_arity = [&](std::size_t n) {
    if (inputs.size() != n)
      throw Error(std::string(builtin_name(b)) + " takes " +
                  std::to_string(n) + " input(s), got " +
                  std::to_string(inputs.size()));
  };
  auto threshold_of = [&]() {
    if (!threshold)
      throw Error(std::string(builtin_name(b)) +
                  " requires a threshold parameter K");
    return *threshold;
  };
  const char *name = builtin_name(b).data();
  switch (b) {
  case Builtin::Avg:
    expect_arity(2);
    return (get_real(inputs[0], name) + get_real(inputs[1], name)) / 2.0;
  case Builtin::Add:
    expect_arity(2);
    return get_real(inputs[0], name) + get_real(inputs[1], name);
  case Builtin::Sub:
    expect_arity(2);
    return get_real(inputs[0], name) - get_real(inputs[1], name);
  case Builtin::Abs:
    expect_arity(1);
    return std::fabs(get_real(inputs[0], name));
  case Builtin::Gcom:
    expect_arity(1);
    return get_real(inputs[0], name) > threshold_of();
  case Builtin::Lcom:
    expect_arity(1);
    return get_real(inputs[0], name) < threshold_of();
  case Builtin::Not:
    expect_arity(1);
    return !get_bool(inputs[0], name);
  case Builtin::And:
    expect_arity(2);
    return get_bool(inputs[0], name) && get_bool(inputs[1], name);
  case Builtin::Or:
    expect_arity(2);
    return get_bool(inputs[0], name) || get_bool(inputs[1], name);
  }
  throw Error("unknown builtin block");
}

std::string render_fmb_table(const BlockType &type) {
  std::ostringstream os;
  os << "kind " << type.name;
  for (SignalType ty : type.in_types)
    os << ' ' << to_string(ty);
  os << " -> " << to_string(type.out_type) << '\n';

  for (const ModeTuple &tuple : type.fmb.all_input_tuples()) {
    ForwardModes fwd = type.fmb.forward(tuple, /*include_uncertain=*/false);
    auto prefix = [&] {
      std::string p = "row";
      for (std::uint8_t i = 0; i < tuple.size; ++i) {
        p.push_back(' ');
        p.push_back(mode_letter(tuple[i]));
      }
      return p;
    }();
    if (fwd.modes == ModeSet::all(SignalType::Real)) {
      os << prefix << " -> a\n";
    } else {
      for (FailureMode m : legal_modes(type.out_type))
        if (fwd.modes.contains(m))
          os << prefix << " -> " << mode_letter(m) << '\n';
    }
    for (FailureMode m : legal_modes(type.out_type))
      if (fwd.uncertain.contains(m))
        os << prefix << " -> " << mode_letter(m) << " u\n";
  }
  return os.str();
}

} // namespace fmr
