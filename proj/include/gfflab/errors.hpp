#pragma once

#include <stdexcept>
#include <string>

namespace gfflab {

// Error taxonomy shared across modules. Each condition named by the
// operation contract that raises it.
struct EmptyDomain : std::runtime_error {
  explicit EmptyDomain(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantViolation : std::runtime_error {
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

struct NotASubdomain : std::runtime_error {
  explicit NotASubdomain(const std::string& what) : std::runtime_error(what) {}
};

struct FactorizationFailure : std::runtime_error {
  explicit FactorizationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct PointTooCloseToBoundary : std::runtime_error {
  explicit PointTooCloseToBoundary(const std::string& what) : std::runtime_error(what) {}
};

struct CoincidentPoints : std::runtime_error {
  explicit CoincidentPoints(const std::string& what) : std::runtime_error(what) {}
};

struct StepLimitExceeded : std::runtime_error {
  explicit StepLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ContractionViolated : std::runtime_error {
  explicit ContractionViolated(const std::string& what) : std::runtime_error(what) {}
};

struct BadParameterRange : std::runtime_error {
  explicit BadParameterRange(const std::string& what) : std::runtime_error(what) {}
};

struct KindMismatch : std::runtime_error {
  explicit KindMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TooFewSamples : std::runtime_error {
  explicit TooFewSamples(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gfflab
