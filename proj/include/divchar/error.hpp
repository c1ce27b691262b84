#pragma once

#include <stdexcept>
#include <string>

namespace divchar {

/// Base of every error thrown by the library. `code()` is a stable
/// machine-readable tag that the CLI reports in its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidModulus : public Error {
 public:
  explicit InvalidModulus(const std::string& what) : Error("invalid_modulus", what) {}
};

class SingularCurve : public Error {
 public:
  explicit SingularCurve(const std::string& what) : Error("singular_curve", what) {}
};

class PointNotOnCurve : public Error {
 public:
  explicit PointNotOnCurve(const std::string& what) : Error("point_not_on_curve", what) {}
};

/// The point is O or 2-torsion; division sequences need order >= 3.
class TorsionPoint : public Error {
 public:
  explicit TorsionPoint(const std::string& what) : Error("torsion_point", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

/// A brute-force routine was asked to run beyond its size guard.
class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& what) : Error("guard_exceeded", what) {}
};

/// Missing or inconsistent experiment parameters.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("usage_error", what) {}
};

}  // namespace divchar
