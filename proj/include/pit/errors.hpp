#pragma once

#include <stdexcept>
#include <string>

namespace pit {

enum class ErrorKind { Structural, Capability, Precondition, Internal, Parse };

// Base for all library failures; kind() decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct StructuralError : Error {
  explicit StructuralError(const std::string& w) : Error(ErrorKind::Structural, w) {}
};
// Ceilings, modulus too small, widths beyond configured limits.
struct CapabilityError : Error {
  explicit CapabilityError(const std::string& w) : Error(ErrorKind::Capability, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::Precondition, w) {}
};
// A guarantee that should hold by construction did not.
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::Parse, w) {}
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Internal: return "internal";
    case ErrorKind::Parse: return "parse";
  }
  return "?";
}

}  // namespace pit
