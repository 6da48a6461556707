//===- version.hpp - Library version --------------------------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef FMR_CORE_VERSION_HPP
#define FMR_CORE_VERSION_HPP

namespace fmr {

inline constexpr const char *kVersion = "0.1.0";

/// Version tag of the JSON report envelope.
inline constexpr int kReportVersion = 1;

} // namespace fmr

#endif // FMR_CORE_VERSION_HPP
