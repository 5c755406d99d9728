#pragma once

#include <stdexcept>
#include <string>

namespace stokes_unfold {

enum class ErrorKind {
    Pole,
    Domain,
    BranchCut,
    Singular,
    Shape,
    Decay,
    RayTooClose,
    Divergent,
    PathThroughSingularity,
    NotResonant,
    NotImplemented,
    OrdinaryPoint,
    EmptyRange,
    GuardRefusal,
    StepUnderflow,
    Tolerance,
    Parse,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Pole: return "pole";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::BranchCut: return "branch-cut";
        case ErrorKind::Singular: return "singular-matrix";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Decay: return "decay-condition";
        case ErrorKind::RayTooClose: return "ray-too-close-to-singularity";
        case ErrorKind::Divergent: return "divergent-integral";
        case ErrorKind::PathThroughSingularity: return "path-through-singularity";
        case ErrorKind::NotResonant: return "not-logarithmic-resonant";
        case ErrorKind::NotImplemented: return "not-implemented";
        case ErrorKind::OrdinaryPoint: return "ordinary-point";
        case ErrorKind::EmptyRange: return "empty-range";
        case ErrorKind::GuardRefusal: return "stiffness-guard";
        case ErrorKind::StepUnderflow: return "step-underflow";
        case ErrorKind::Tolerance: return "tolerance-not-achieved";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

// process exit code reported by the CLI
inline int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return 2;
        case ErrorKind::GuardRefusal: return 4;
        case ErrorKind::Singular:
        case ErrorKind::StepUnderflow:
        case ErrorKind::Tolerance: return 5;
        default: return 3;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace stokes_unfold
