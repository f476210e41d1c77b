#pragma once

#include <stdexcept>
#include <string>

namespace xiqed {

enum class ErrorKind {
    NonlinearitySingularity,
    ComplexSpectrum,
    EigensolverNonConvergence,
    StepUnderflow,
    VacuumField,
    InvalidArgument,
};

const char *to_string(ErrorKind kind);

/// Raised for model-level failures: singular couplings, solver breakdowns,
/// undefined observables. The message always names the offending inputs.
class ModelError : public std::runtime_error {
  public:
    ModelError(ErrorKind kind, const std::string &detail);

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace xiqed
