#ifndef MUNTZ_ERRORS_HPP
#define MUNTZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace muntz {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

// Integrand returned NaN/Inf at a quadrature node.
struct NonFiniteError : Error {
    using Error::Error;
};

// Adaptive refinement stalled before reaching the tolerance.
struct NoConvergenceError : Error {
    using Error::Error;
};

struct StepUnderflowError : Error {
    using Error::Error;
};

struct EvaluationError : Error {
    using Error::Error;
};

struct MomentDivergesError : Error {
    using Error::Error;
};

struct NotAdmissibleError : Error {
    using Error::Error;
};

struct MomentMatrixSingularError : Error {
    MomentMatrixSingularError(const std::string& what, int attained)
        : Error(what), attained_n(attained) {}
    int attained_n;
};

struct FactorizationError : Error {
    FactorizationError(const std::string& what, int pivot)
        : Error(what), pivot_index(pivot) {}
    int pivot_index;
};

struct NegativeRadicandError : Error {
    using Error::Error;
};

struct TailBoundError : Error {
    using Error::Error;
};

struct GridViolationError : Error {
    using Error::Error;
};

} // namespace muntz

#endif
