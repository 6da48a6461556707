//===- modes.hpp - Failure modes and value-pair classification ------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A signal is either real-valued or boolean. A failure state is a pair of
// values (reported, actual) of the same signal type; it is classified into
// one of a small set of qualitative failure modes:
//
//   real:  l (reported < actual)   m (equal)   h (reported > actual)
//   bool:  f (False instead of True)   m (equal)   t (True instead of False)
//
// The modes of a type partition its value pairs, so classification is total
// and single-valued. Everything here is an immutable value type.
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_MODES_HPP
#define FMR_CORE_MODES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace fmr {

enum class SignalType : std::uint8_t { Real, Bool };

std::string to_string(SignalType ty);

enum class FailureMode : std::uint8_t {
  Low,        // l: reads too low (real)
  Match,      // m: reported equals actual (either type)
  High,       // h: reads too high (real)
  FalseFault, // f: reports False when the actual value is True (bool)
  TrueFault,  // t: reports True when the actual value is False (bool)
};

inline constexpr int kModeCount = 5;

/// Serialized single-letter name: l, m, h, f, t.
char mode_letter(FailureMode mode);
std::optional<FailureMode> mode_from_letter(char letter);

bool mode_legal_for(FailureMode mode, SignalType ty);

/// Stable sort rank giving the canonical order l < f < m < h < t (so reals
/// sort l,m,h and bools f,m,t).
int mode_rank(FailureMode mode);

/// Legal modes of a type in canonical order: {l,m,h} or {f,m,t}.
std::span<const FailureMode> legal_modes(SignalType ty);

/// A concrete signal value. The alternative index mirrors SignalType.
using Value = std::variant<double, bool>;

SignalType value_type(const Value &v);
std::string to_string(const Value &v);

/// (reported, actual) pair of one signal. It models a failure exactly when
/// the two values differ.
struct FailureState {
  Value reported;
  Value actual;

  bool is_failure() const { return !(reported == actual); }
};

/// Partition member containing (reported, actual). Real values must be
/// finite; throws Error otherwise, or on a reported/actual type mismatch.
FailureMode classify(const FailureState &state, SignalType ty);
FailureMode classify_real(double reported, double actual);
FailureMode classify_bool(bool reported, bool actual);

/// Nonempty set of failure modes of one signal type.
class ModeSet {
public:
  static ModeSet single(FailureMode mode, SignalType ty);
  /// {l,m,h} or {f,m,t} depending on ty.
  static ModeSet all(SignalType ty);

  SignalType type() const { return ty_; }
  bool contains(FailureMode mode) const { return (bits_ & bit(mode)) != 0; }
  int size() const;
  bool empty() const { return bits_ == 0; }

  void insert(FailureMode mode);
  /// Set union; throws Error on mixed signal types.
  ModeSet union_with(const ModeSet &other) const;

  /// Letters in canonical order (l,m,h then f,m,t); the full real set
  /// renders as "a" (all faults possible).
  std::string render() const;

  bool operator==(const ModeSet &other) const {
    return bits_ == other.bits_ && ty_ == other.ty_;
  }

  /// Empty set of the given type. Mode sets handed to callers are nonempty;
  /// the empty value only exists as an accumulator seed.
  static ModeSet none(SignalType ty) { return ModeSet(ty); }

private:
  explicit ModeSet(SignalType ty) : bits_(0), ty_(ty) {}
  static std::uint8_t bit(FailureMode m) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(m));
  }

  std::uint8_t bits_;
  SignalType ty_;
};

} // namespace fmr

#endif // FMR_CORE_MODES_HPP
