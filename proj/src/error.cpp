#include "xiqed/error.hpp"

namespace xiqed {

const char *to_string(ErrorKind kind) {
    switch(kind) {
        case ErrorKind::NonlinearitySingularity: return "nonlinearity singularity";
        case ErrorKind::ComplexSpectrum: return "complex spectrum";
        case ErrorKind::EigensolverNonConvergence: return "eigensolver non-convergence";
        case ErrorKind::StepUnderflow: return "step underflow";
        case ErrorKind::VacuumField: return "vacuum field";
        case ErrorKind::InvalidArgument: return "invalid argument";
    }
    return "unknown error";
}

ModelError::ModelError(ErrorKind kind, const std::string &detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

} // namespace xiqed
