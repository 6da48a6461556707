//===- catalog.hpp - Function blocks and their failure mode tables --------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The catalog holds the available function-block types. Each entry pairs
//
//   * concrete semantics: a pure function from input values to the output
//     value (built-in kinds only), and
//   * a failure mode block (FMB): the complete table of reachable
//     (input mode tuple -> output mode) transitions, with the uncertain
//     And/Or outcomes carried as an explicit flag.
//
// The practical variant of an FMB is the same table with the uncertain rows
// removed; nothing else differs between variants. Comparator thresholds are
// part of the concrete semantics only - the mode tables are independent of
// the threshold value, which is why the FMB is keyed by kind name alone.
//
// User-defined kinds can be added from a tabular text format (`fmb v1`);
// they carry an FMB but no concrete semantics, so they support backward
// analysis but not brute-force verification.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_CATALOG_HPP
#define FMR_CORE_CATALOG_HPP

#include "core/modes.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fmr {

/// Block kinds with compiled-in concrete semantics.
enum class Builtin : std::uint8_t { Avg, Add, Sub, Abs, Gcom, Lcom, Not, And, Or };

std::string_view builtin_name(Builtin b);

/// Fixed-arity tuple of input failure modes (arity 1 or 2).
struct ModeTuple {
  std::uint8_t size = 0;
  std::array<FailureMode, 2> modes{};

  static ModeTuple of(FailureMode a) { return {1, {a, a}}; }
  static ModeTuple of(FailureMode a, FailureMode b) { return {2, {a, b}}; }

  FailureMode operator[](std::size_t i) const { return modes[i]; }

  bool operator==(const ModeTuple &o) const {
    if (size != o.size)
      return false;
    for (std::uint8_t i = 0; i < size; ++i)
      if (modes[i] != o.modes[i])
        return false;
    return true;
  }
  bool operator<(const ModeTuple &o) const;

  std::string render() const; // e.g. "(l,h)"
};

/// One transition of an FMB: this input combination can produce this output
/// mode. `uncertain` marks the And/Or outcomes excluded from practical
/// failure tracking.
struct FmbRow {
  ModeTuple inputs;
  FailureMode output;
  bool uncertain = false;

  bool operator==(const FmbRow &o) const = default;
  bool operator<(const FmbRow &o) const;
};

/// Output modes reachable from one input combination, with the uncertain
/// subset reported separately.
struct ForwardModes {
  ModeSet modes;     // per include_uncertain policy of the query
  ModeSet uncertain; // rows flagged uncertain (always reported)
};

enum class FmbVariant { Theoretical, Practical };

std::string_view to_string(FmbVariant v);
std::optional<FmbVariant> variant_from_string(std::string_view s);

/// Failure mode block: the full transition table for one block kind.
class Fmb {
public:
  Fmb() = default;
  Fmb(std::vector<SignalType> in_types, SignalType out_type,
      std::vector<FmbRow> rows);

  const std::vector<FmbRow> &rows() const { return rows_; }
  const std::vector<SignalType> &input_types() const { return in_types_; }
  SignalType output_type() const { return out_type_; }
  std::size_t arity() const { return in_types_.size(); }

  /// Table with the uncertain rows dropped (Practical) or kept.
  Fmb with_variant(FmbVariant v) const;

  /// Output modes reachable from `inputs`. With include_uncertain off the
  /// uncertain outcomes are excluded from `.modes` but still listed in
  /// `.uncertain`. Throws Error on arity/type mismatch.
  ForwardModes forward(const ModeTuple &inputs, bool include_uncertain) const;

  /// Inverse failure transformer restricted to one output mode: every input
  /// combination with a (possibly uncertain) row producing `output`.
  /// Throws Error if `output` is illegal for the block's output type.
  std::vector<ModeTuple> inverse(FailureMode output,
                                 bool include_uncertain) const;

  /// All input combinations over the block's input types, in canonical
  /// order.
  std::vector<ModeTuple> all_input_tuples() const;

  bool operator==(const Fmb &o) const = default;

private:
  void check_tuple(const ModeTuple &inputs) const;

  std::vector<SignalType> in_types_;
  SignalType out_type_ = SignalType::Real;
  std::vector<FmbRow> rows_; // sorted canonically, unique
};

/// A catalog entry: signature, optional concrete semantics, mode table.
struct BlockType {
  std::string name;
  std::vector<SignalType> in_types;
  SignalType out_type = SignalType::Real;
  bool takes_threshold = false;
  std::optional<Builtin> builtin; // concrete semantics available iff set
  Fmb fmb;                        // theoretical table

  std::size_t arity() const { return in_types.size(); }
};

/// Immutable-after-construction registry of block types.
class Catalog {
public:
  /// The nine built-in kinds.
  static Catalog builtins();

  const BlockType &at(std::string_view name) const; // throws unknown kind
  const BlockType *find(std::string_view name) const;
  std::vector<std::string> names() const; // sorted

  /// Adds user-defined kinds from the `fmb v1` tabular text format.
  /// Throws ParseError with positions; rejects redefinition of any kind.
  void load_table(std::string_view text);

private:
  std::map<std::string, BlockType, std::less<>> types_;
};

/// fmb_lookup: the variant-filtered table of a cataloged kind.
Fmb fmb_lookup(const Catalog &catalog, std::string_view kind, FmbVariant v);

/// Concrete semantics of a built-in block. `threshold` is required for
/// Gcom/Lcom and ignored otherwise. Throws Error on arity/type mismatch.
Value eval_builtin(Builtin b, std::optional<double> threshold,
                   std::span<const Value> inputs);

/// Renders a block type in the `fmb v1` text format (round-trips through
/// Catalog::load_table for kinds without a threshold parameter).
std::string render_fmb_table(const BlockType &type);

} // namespace fmr

#endif // FMR_CORE_CATALOG_HPP
