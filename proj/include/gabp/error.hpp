#ifndef GABP_ERROR_HPP
#define GABP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gabp {

enum class ErrorKind {
  InvalidArgument,
  Io,
  Parse,
  Dimension,
  Numeric,
  Mismatch,
};

// Every failure raised by the core library. The C API maps `kind` onto a
// status code and keeps `what()` as the thread's last error message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gabp

#endif  // GABP_ERROR_HPP
