#pragma once

#include <stdexcept>
#include <string>

namespace asymfree {

// Error categories map onto CLI exit codes: invalid input -> 1,
// runtime cap exceeded -> 3. Verification failures are values, not throws.
enum class ErrorKind {
    InvalidArgument,
    CapExceeded,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, what);
}

[[noreturn]] inline void throw_cap(const std::string& what) {
    throw Error(ErrorKind::CapExceeded, what);
}

}  // namespace asymfree
