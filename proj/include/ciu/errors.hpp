#pragma once

#include <stdexcept>
#include <string>

namespace ciu {

// Bad inputs or contract violations. The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Environment or system failures (I/O, resource limits). CLI exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// chat ingest
struct MalformedTier : ValidationError {
  using ValidationError::ValidationError;
};
struct EmptyTranscript : ValidationError {
  using ValidationError::ValidationError;
};

// token labels
struct LabelConstraintViolation : ValidationError {
  using ValidationError::ValidationError;
};
struct DuplicateKey : ValidationError {
  using ValidationError::ValidationError;
};
struct NonBinaryFlag : ValidationError {
  using ValidationError::ValidationError;
};
struct MissingLabel : ValidationError {
  using ValidationError::ValidationError;
};
struct SurfaceMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct EmptyTask : ValidationError {
  using ValidationError::ValidationError;
};

// classifiers
struct SingleClassTraining : ValidationError {
  using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};

// metrics
struct LengthMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct SingleClassEval : ValidationError {
  using ValidationError::ValidationError;
};

// stats
struct TooFewGroups : ValidationError {
  using ValidationError::ValidationError;
};

// harness
struct TooFewTranscripts : ValidationError {
  using ValidationError::ValidationError;
};

struct IoError : RuntimeFailure {
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace ciu
