#ifndef RANDMEANS_ERRORS_HPP
#define RANDMEANS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace randmeans {

// Error taxonomy shared by the C++ core and the C API / CLI exit codes:
//   parse      -> malformed JSON or unknown "kind"
//   invalid    -> structurally well-formed but semantically inadmissible input
//   domain     -> evaluation outside the admissible domain of an operation
//   stat       -> a statistical acceptance check failed (data is still written)
//   io         -> filesystem failure while writing artifacts
//   unsupported-> requested quantity is not defined for this input family
enum class ErrorCode { parse, invalid, domain, stat, io, unsupported };

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

} // namespace randmeans

#endif
