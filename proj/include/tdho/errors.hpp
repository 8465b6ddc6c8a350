#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tdho {

enum class ErrorKind {
  OutOfDomain,
  InvalidProfile,
  NotMonotone,
  ExactAdiabatic,
  NearSingular,
  BranchViolation,
  NotRealFrequency,
  NotPositiveMass,
  DomainTooLarge,
  SingularEndpoint,
  InvalidSpec,
  NumericalBranch,
  SingularMass,
  ScaleTooLarge,
  StepUnderflow,
  SegmentViolation,
  ParseError,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::ExactAdiabatic: return "ExactAdiabatic";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::BranchViolation: return "BranchViolation";
    case ErrorKind::NotRealFrequency: return "NotRealFrequency";
    case ErrorKind::NotPositiveMass: return "NotPositiveMass";
    case ErrorKind::DomainTooLarge: return "DomainTooLarge";
    case ErrorKind::SingularEndpoint: return "SingularEndpoint";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NumericalBranch: return "NumericalBranch";
    case ErrorKind::SingularMass: return "SingularMass";
    case ErrorKind::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::SegmentViolation: return "SegmentViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `where()` carries the offending
/// time (t or t') when one exists, NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        double where = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  double where() const noexcept { return where_; }
  bool has_location() const noexcept { return !std::isnan(where_); }

 private:
  ErrorKind kind_;
  double where_;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  bool valid() const noexcept { return std::isfinite(lo) && std::isfinite(hi) && hi > lo; }
};

}  // namespace tdho
