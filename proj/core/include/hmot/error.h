#pragma once

#include <stdexcept>
#include <string>

namespace hmot {

/// Input violates an operation's precondition (shape, finiteness, normalization).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Problem exceeds a hard size limit (e.g. the dense LP oracle).
class SizeLimitExceeded : public std::length_error {
 public:
  explicit SizeLimitExceeded(const std::string& what) : std::length_error(what) {}
};

/// Malformed file or document.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hmot
