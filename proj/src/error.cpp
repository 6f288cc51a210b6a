#include "frontwave/error.hpp"

namespace frontwave {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonCompliant: return "NonCompliant";
        case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
        case ErrorKind::BracketingFailure: return "BracketingFailure";
        case ErrorKind::InvalidRegime: return "InvalidRegime";
        case ErrorKind::NoTangency: return "NoTangency";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SpeedOutOfRange: return "SpeedOutOfRange";
        case ErrorKind::NoSignChange: return "NoSignChange";
        case ErrorKind::NoAdmissibleRoot: return "NoAdmissibleRoot";
        case ErrorKind::TailUnderflow: return "TailUnderflow";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::DegenerateFront: return "DegenerateFront";
        case ErrorKind::NegativeSpeed: return "NegativeSpeed";
        case ErrorKind::StabilityViolation: return "StabilityViolation";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::Precondition: return "Precondition";
        case ErrorKind::WindowTooShort: return "WindowTooShort";
        case ErrorKind::WindowOutsideDomain: return "WindowOutsideDomain";
        case ErrorKind::EmptyRayWindow: return "EmptyRayWindow";
        case ErrorKind::InfeasibleBracket: return "InfeasibleBracket";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::Config: return "Config";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

ErrorCategory error_category(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonCompliant:
        case ErrorKind::NoPositiveRoot:
        case ErrorKind::InvalidRegime:
        case ErrorKind::NoTangency:
        case ErrorKind::NoAdmissibleRoot:
        case ErrorKind::NotPositive:
        case ErrorKind::InfeasibleBracket:
        case ErrorKind::Config:
            return ErrorCategory::ModelRegime;
        case ErrorKind::Io:
            return ErrorCategory::Io;
        default:
            return ErrorCategory::Solver;
    }
}

}  // namespace frontwave
