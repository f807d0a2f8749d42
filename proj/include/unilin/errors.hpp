#pragma once

#include <stdexcept>
#include <string>

namespace unilin {

enum class Errc {
  InvalidArgument = 1,
  ZeroVector,
  DependentBasis,
  NotClosed,
  NotNilpotent,
  NotNilpotentAlgebra,
  EmptyCatalog,
  TrivialIntersection,
  DegenerateLattice,
  ResolutionNotReached,
  ExponentViolation,
  SingularPoint,
  PrecisionExhausted,
  PreconditionUnverifiable,
  Internal,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidArgument, what);
}

}  // namespace unilin
