//===- modes.cpp - Failure modes and value-pair classification ------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "core/modes.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <sstream>

namespace fmr {

std::string to_string(SignalType ty) {
  return ty == SignalType::Real ? "real" : "bool";
}

char mode_letter(FailureMode mode) {
  switch (mode) {
  case FailureMode::Low:
    return 'l';
  case FailureMode::Match:
    return 'm';
  case FailureMode::High:
    return 'h';
  case FailureMode::FalseFault:
    return 'f';
  case FailureMode::TrueFault:
    return 't';
  }
  return '?';
}

std::optional<FailureMode> mode_from_letter(char letter) {
  switch (letter) {
  case 'l':
    return FailureMode::Low;
  case 'm':
    return FailureMode::Match;
  case 'h':
    return FailureMode::High;
  case 'f':
    return FailureMode::FalseFault;
  case 't':
    return FailureMode::TrueFault;
  default:
    return std::nullopt;
  }
}

bool mode_legal_for(FailureMode mode, SignalType ty) {
  switch (mode) {
  case FailureMode::Match:
    return true;
  case FailureMode::Low:
  case FailureMode::High:
    return ty == SignalType::Real;
  case FailureMode::FalseFault:
  case FailureMode::TrueFault:
    return ty == SignalType::Bool;
  }
  return false;
}

int mode_rank(FailureMode mode) {
  switch (mode) {
  case FailureMode::Low:
    return 0;
  case FailureMode::FalseFault:
    return 1;
  case FailureMode::Match:
    return 2;
  case FailureMode::High:
    return 3;
  case FailureMode::TrueFault:
    return 4;
  }
  return 5;
}

std::span<const FailureMode> legal_modes(SignalType ty) {
  static const FailureMode reals[] = {FailureMode::Low, FailureMode::Match,
                                      FailureMode::High};
  static const FailureMode bools[] = {FailureMode::FalseFault,
                                      FailureMode::Match,
                                      FailureMode::TrueFault};
  return ty == SignalType::Real ? std::span<const FailureMode>(reals)
                                : std::span<const FailureMode>(bools);
}

SignalType value_type(const Value &v) {
  return std::holds_alternative<double>(v) ? SignalType::Real
                                           : SignalType::Bool;
}

std::string to_string(const Value &v) {
  if (std::holds_alternative<bool>(v))
    return std::get<bool>(v) ? "true" : "false";
  std::ostringstream os;
  os << std::get<double>(v);
  return os.str();
}

FailureMode classify_real(double reported, double actual) {
  if (!std::isfinite(reported) || !std::isfinite(actual))
    throw Error("cannot classify non-finite real value pair");
  if (reported < actual)
    return FailureMode::Low;
  if (reported > actual)
    return FailureMode::High;
  return FailureMode::Match;
}

FailureMode classify_bool(bool reported, bool actual) {
  if (reported == actual)
    return FailureMode::Match;
  return reported ? FailureMode::TrueFault : FailureMode::FalseFault;
}

FailureMode classify(const FailureState &state, SignalType ty) {
  if (value_type(state.reported) != ty || value_type(state.actual) != ty)
    throw Error("failure state value type does not match signal type " +
                to_string(ty));
  if (ty == SignalType::Real)
    return classify_real(std::get<double>(state.reported),
                         std::get<double>(state.actual));
  return classify_bool(std::get<bool>(state.reported),
                       std::get<bool>(state.actual));
}

ModeSet ModeSet::single(FailureMode mode, SignalType ty) {
  if (!mode_legal_for(mode, ty))
    throw Error(std::string("mode '") + mode_letter(mode) +
                "' is not legal for " + to_string(ty) + " signals");
  ModeSet s(ty);
  s.bits_ = bit(mode);
  return s;
}

ModeSet ModeSet::all(SignalType ty) {
  ModeSet s(ty);
  if (ty == SignalType::Real)
    s.bits_ = bit(FailureMode::Low) | bit(FailureMode::Match) |
              bit(FailureMode::High);
  else
    s.bits_ = bit(FailureMode::FalseFault) | bit(FailureMode::Match) |
              bit(FailureMode::TrueFault);
  return s;
}

int ModeSet::size() const {
  int n = 0;
  for (std::uint8_t b = bits_; b; b &= static_cast<std::uint8_t>(b - 1))
    ++n;
  return n;
}

void ModeSet::insert(FailureMode mode) {
  if (!mode_legal_for(mode, ty_))
    throw Error(std::string("mode '") + mode_letter(mode) +
                "' is not legal for " + to_string(ty_) + " signals");
  bits_ |= bit(mode);
}

ModeSet ModeSet::union_with(const ModeSet &other) const {
  if (ty_ != other.ty_)
    throw Error("cannot union mode sets of different signal types");
  ModeSet s(ty_);
  s.bits_ = bits_ | other.bits_;
  return s;
}

std::string ModeSet::render() const {
  if (*this == all(SignalType::Real))
    return "a";
  static const FailureMode order[] = {
      FailureMode::Low, FailureMode::FalseFault, FailureMode::Match,
      FailureMode::High, FailureMode::TrueFault};
  std::string out;
  for (FailureMode m : order)
    if (contains(m))
      out.push_back(mode_letter(m));
  return out;
}

} // namespace fmr
