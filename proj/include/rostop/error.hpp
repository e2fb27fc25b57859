#ifndef ROSTOP_ERROR_HPP
#define ROSTOP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rostop {

/// Error categories. The CLI maps each kind to an exit code and a
/// machine-parsable prefix on standard error.
enum class ErrorKind {
  parameter,      // invalid numeric parameter (negative epsilon, delta >= T, ...)
  configuration,  // inconsistent inputs (missing raw paths, unknown config key, ...)
  shape,          // dimension mismatch between inputs
  refusal,        // a solver declined the request (enumeration cap exceeded)
  fitting,        // regression could not be solved
  budget,         // pipeline budget exhausted before any solve completed
  factorization,  // correlation matrix not positive semidefinite
  io,             // file could not be read or written
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what)
{
  if (!condition) { fail(kind, what); }
}

}  // namespace rostop

#endif  // ROSTOP_ERROR_HPP
