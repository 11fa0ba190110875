#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scrid {

enum class ErrorKind {
  InvalidArgument,
  Dimension,
  Parse,
  Io,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this type; `kind` is stable for the CLI's
// machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scrid
