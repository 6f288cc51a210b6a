#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontwave {

/// Every failure the library can report. The CLI maps these onto exit codes
/// through error_category().
enum class ErrorKind {
    // model
    NonCompliant,
    NoPositiveRoot,
    BracketingFailure,
    InvalidRegime,
    // semiwave
    NoTangency,
    NoConvergence,
    SpeedOutOfRange,
    NoSignChange,
    NoAdmissibleRoot,
    TailUnderflow,
    NotPositive,
    // fbsolver
    DegenerateFront,
    NegativeSpeed,
    StabilityViolation,
    NonFinite,
    // analysis
    Precondition,
    WindowTooShort,
    WindowOutsideDomain,
    EmptyRayWindow,
    InfeasibleBracket,
    Infeasible,
    // cli
    Config,
    Io,
};

enum class ErrorCategory { ModelRegime, Solver, Io };

std::string_view to_string(ErrorKind kind);
ErrorCategory error_category(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace frontwave
