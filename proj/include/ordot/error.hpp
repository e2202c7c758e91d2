#pragma once

#include <stdexcept>
#include <string>

namespace ordot {

// Base for every error raised by the library. Each subclass maps to one
// failure mode so callers (and the Python bindings) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ORDOT_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

ORDOT_DEFINE_ERROR(InvalidMass);
ORDOT_DEFINE_ERROR(DegenerateHistogram);
ORDOT_DEFINE_ERROR(InvalidClass);
ORDOT_DEFINE_ERROR(ShapeError);
ORDOT_DEFINE_ERROR(NonConvexMetric);
ORDOT_DEFINE_ERROR(UnsupportedFamily);
ORDOT_DEFINE_ERROR(OracleFailure);
ORDOT_DEFINE_ERROR(UnderflowError);
ORDOT_DEFINE_ERROR(InvalidMixture);
ORDOT_DEFINE_ERROR(ConfigError);
ORDOT_DEFINE_ERROR(DegenerateKappa);
ORDOT_DEFINE_ERROR(UndefinedTPR);
ORDOT_DEFINE_ERROR(ParseError);

#undef ORDOT_DEFINE_ERROR

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(int epoch, const std::string& what)
      : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace ordot
