#pragma once

#include <stdexcept>
#include <string>

namespace sc {

enum class ErrorCode {
  NonComposable,
  NotParallel,
  ValueEqualityNotProven,
  BoundaryMismatch,
  InvalidGenerator,
  TypeMismatch,
  InvalidBinding,
  SideConditionFailed,
  PatternNotFound,
  RegionNotPureChi,
  BoundaryChanged,
  ResultMismatch,
  NotFibFragment,
  UnprovenDependency,
  EnvMissing,
  RelationViolated,
  ParseError,
  UnknownName,
  IOError,
  SearchLimit,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace sc
