// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kpic {

/// Splits an unquoted CSV line; trims a trailing '\r'.
std::vector<std::string> split_csv(std::string_view line);

/// Shortest round-trip decimal form (std::to_chars); "inf"/"-inf"/"nan" for
/// non-finite values. Used everywhere a double reaches a report so identical
/// runs produce identical bytes.
std::string fmt_double(double v);

std::string fmt_int(int64_t v);

}  // namespace kpic
