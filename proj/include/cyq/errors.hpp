#pragma once

#include <stdexcept>
#include <string>

namespace cyq {

/// Root of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed construction data (non-monic polynomial, shape mismatch, ...).
struct ConstructionError : Error {
  using Error::Error;
};

/// A zero divisor showed up while inverting in a field extension.
struct ReducibilityError : Error {
  using Error::Error;
};

/// The pairing (x, y) -> Tr(xy) on the base is degenerate.
struct NondegenerateTraceError : Error {
  using Error::Error;
};

struct BimoduleAxiomError : Error {
  using Error::Error;
};

struct GradingError : Error {
  using Error::Error;
};

struct NotClosedError : Error {
  using Error::Error;
};

struct DegenerateEtaError : Error {
  using Error::Error;
};

struct CategoryAxiomError : Error {
  using Error::Error;
};

struct HsesCertificateError : Error {
  using Error::Error;
};

/// The snake-lemma system has no solution, which means the sequence is not a
/// homotopy short exact sequence on the range that was used.
struct InconsistencyError : Error {
  using Error::Error;
};

struct NotAFormError : Error {
  using Error::Error;
};

}  // namespace cyq
