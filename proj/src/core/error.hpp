// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kpic {

enum class Errc {
  InvalidArg = 1,
  Io = 2,
  Format = 3,
  Config = 4,
  Degenerate = 5,
  UndefinedIndex = 6,
  Internal = 7,
};

/// Library-wide exception carrying a coarse error category that the C API
/// maps onto status codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArg: return "invalid_argument";
    case Errc::Io: return "io";
    case Errc::Format: return "format";
    case Errc::Config: return "config";
    case Errc::Degenerate: return "degenerate";
    case Errc::UndefinedIndex: return "undefined_index";
    case Errc::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace kpic
