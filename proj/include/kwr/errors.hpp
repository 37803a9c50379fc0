#pragma once

#include <stdexcept>
#include <string>

namespace kwr {

// Base class for all library errors. `exit_code` follows the CLI contract:
// 1 = bad input, 2 = precision/certification failure, 3 = internal assertion.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg, int exit_code = 1)
      : std::runtime_error(msg), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg, 1) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg, 1) {}
};

class ModeMismatch : public Error {
 public:
  explicit ModeMismatch(const std::string& msg) : Error("mode mismatch: " + msg, 1) {}
};

class PrecisionTooLow : public Error {
 public:
  explicit PrecisionTooLow(const std::string& msg) : Error("precision too low: " + msg, 2) {}
};

class InconsistentLattice : public Error {
 public:
  explicit InconsistentLattice(const std::string& msg) : Error("inconsistent lattice: " + msg, 2) {}
};

class NotRealOnTorus : public Error {
 public:
  explicit NotRealOnTorus(const std::string& msg) : Error("not real on torus: " + msg, 2) {}
};

class CosetOutOfRange : public Error {
 public:
  explicit CosetOutOfRange(const std::string& msg) : Error("coset out of range: " + msg, 1) {}
};

class NotDegenerate : public Error {
 public:
  explicit NotDegenerate(const std::string& msg) : Error("closure not degenerate: " + msg, 1) {}
};

class DegenerateClosure : public Error {
 public:
  explicit DegenerateClosure(const std::string& msg) : Error("closure is degenerate: " + msg, 1) {}
};

class UnsupportedRelationShape : public Error {
 public:
  explicit UnsupportedRelationShape(const std::string& msg)
      : Error("unsupported relation shape: " + msg, 2) {}
};

class RHViolation : public Error {
 public:
  explicit RHViolation(const std::string& msg) : Error("inverse zero off |gamma|=sqrt(q): " + msg, 2) {}
};

class MissingZetaNumerator : public Error {
 public:
  explicit MissingZetaNumerator(const std::string& msg) : Error("missing zeta numerator: " + msg, 1) {}
};

class UnsupportedField : public Error {
 public:
  explicit UnsupportedField(const std::string& msg) : Error("unsupported field: " + msg, 1) {}
};

class AmbiguousPattern : public Error {
 public:
  explicit AmbiguousPattern(const std::string& msg) : Error("ambiguous pattern: " + msg, 1) {}
};

class NotDirectSum : public Error {
 public:
  explicit NotDirectSum(const std::string& msg) : Error("span is not a direct sum: " + msg, 2) {}
};

class TieMassWarning : public Error {
 public:
  explicit TieMassWarning(const std::string& msg) : Error("tie mass above threshold: " + msg, 2) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& msg) : Error("internal: " + msg, 3) {}
};

}  // namespace kwr
