#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigkit {

enum class ErrorKind {
  InvalidLetter,
  Capacity,
  Range,
  CorruptWord,
  Domain,
  Shape,
  Window,
  UnsupportedWordSet,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so front ends can map
/// it onto exit codes without parsing message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sigkit
