#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nrcs {

enum class ErrorKind {
  kInvalidInput,
  kInvalidFashion,
  kNoForest,
  kPreconditionViolated,
  kNotStructurallyControllable,
  kDesignFailure,
  kParse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kInvalidFashion: return "invalid-fashion";
    case ErrorKind::kNoForest: return "no-forest";
    case ErrorKind::kPreconditionViolated: return "precondition-violated";
    case ErrorKind::kNotStructurallyControllable: return "not-structurally-controllable";
    case ErrorKind::kDesignFailure: return "design-failure";
    case ErrorKind::kParse: return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when some vertices cannot be reached from any driver. Vertex ids are 1-based.
class NoForestError : public Error {
 public:
  NoForestError(std::vector<int> unreachable, const std::string& what)
      : Error(ErrorKind::kNoForest, what), unreachable_(std::move(unreachable)) {}

  const std::vector<int>& unreachable() const noexcept { return unreachable_; }

 private:
  std::vector<int> unreachable_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace nrcs
