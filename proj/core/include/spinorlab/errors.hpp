#ifndef SPINORLAB_ERRORS_HPP
#define SPINORLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinorlab {

/// Base class of all spinorlab exceptions.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class RoleMismatch : public Error {
public:
  explicit RoleMismatch(const std::string& w) : Error("role mismatch: " + w) {}
};

class ExtentMismatch : public Error {
public:
  explicit ExtentMismatch(const std::string& w) : Error("extent mismatch: " + w) {}
};

/// A singular value fell within a factor 10 of the rank cutoff; the caller
/// must tighten tolerances before trusting any rank decision.
class ToleranceAmbiguous : public Error {
public:
  explicit ToleranceAmbiguous(const std::string& w) : Error("ambiguous rank decision: " + w) {}
};

class UnsupportedDimension : public Error {
public:
  explicit UnsupportedDimension(const std::string& w) : Error("unsupported dimension: " + w) {}
};

class NotSkew : public Error {
public:
  explicit NotSkew(const std::string& w) : Error("input is not totally skew: " + w) {}
};

class ZeroSpinor : public Error {
public:
  explicit ZeroSpinor(const std::string& w) : Error("zero spinor: " + w) {}
};

/// Two independent routes to the same verdict disagreed.  This signals a
/// convention bug in the library itself and must abort the computation.
class InconsistentVerdict : public Error {
public:
  explicit InconsistentVerdict(const std::string& w) : Error("inconsistent verdict: " + w) {}
};

class NotPure : public Error {
public:
  explicit NotPure(const std::string& w) : Error("spinor is not pure: " + w) {}
};

class DegenerateDual : public Error {
public:
  explicit DegenerateDual(const std::string& w) : Error("degenerate dual candidate: " + w) {}
};

class SymmetryViolation : public Error {
public:
  explicit SymmetryViolation(const std::string& w) : Error("symmetry violation: " + w) {}
};

/// Requested an irreducible component that does not exist at this m
/// (e.g. the middle Weyl component at m = 3).
class UndefinedComponent : public Error {
public:
  explicit UndefinedComponent(const std::string& w) : Error("undefined component: " + w) {}
};

class BadComponentSymmetry : public Error {
public:
  explicit BadComponentSymmetry(const std::string& w) : Error("bad component symmetry: " + w) {}
};

class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& w)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + w),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

class AsymmetricEntry : public Error {
public:
  explicit AsymmetricEntry(const std::string& w) : Error("asymmetric metric entry: " + w) {}
};

class DegenerateMetric : public Error {
public:
  explicit DegenerateMetric(const std::string& w) : Error("degenerate metric: " + w) {}
};

class ZeroConformalFactor : public Error {
public:
  explicit ZeroConformalFactor(const std::string& w) : Error("conformal factor vanishes: " + w) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& w) : Error("i/o error: " + w) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& w) : Error("validation error: " + w) {}
};

} // namespace spinorlab

#endif
