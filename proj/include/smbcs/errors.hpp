#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smbcs {

/// Precondition or argument outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configurable cost guard (matrix order, enumeration size) was exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity violated a hard numeric invariant (e.g. a probability
/// outside [0, 1]). Never silently clipped.
class NumericAssertion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Routes library warnings. The default handler writes to stderr; pass an
/// empty handler to restore it. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace smbcs
