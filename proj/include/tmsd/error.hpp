#ifndef TMSD_ERROR_HPP
#define TMSD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tmsd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct SingularTransform : Error {
  using Error::Error;
};

// Carries the 0-based index of the first offending frontal slice.
struct SingularSlice : Error {
  int slice;
  explicit SingularSlice(int k)
      : Error("singular frontal slice " + std::to_string(k)), slice(k) {}
};

struct DecompositionFailed : Error {
  using Error::Error;
};

struct NotATensorColumn : Error {
  using Error::Error;
};

struct KindMismatch : Error {
  using Error::Error;
};

struct TooManySamples : Error {
  using Error::Error;
};

struct RankDeficientSample : Error {
  using Error::Error;
};

struct DegenerateBasis : Error {
  int slice;
  explicit DegenerateBasis(int k)
      : Error("ill-conditioned basis slice " + std::to_string(k)), slice(k) {}
};

struct UnsupportedTransform : Error {
  using Error::Error;
};

struct InvalidDelta : Error {
  using Error::Error;
};

struct InvalidP : Error {
  using Error::Error;
};

struct InvalidDegrees : Error {
  using Error::Error;
};

struct InvalidArg : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct DegenerateSpectrum : Error {
  using Error::Error;
};

struct ZeroSignal : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace tmsd

#endif  // TMSD_ERROR_HPP
