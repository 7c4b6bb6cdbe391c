#pragma once

#include <stdexcept>
#include <string>

namespace gmdet {

enum class ErrorKind {
    MalformedInput,
    UnsupportedPoint,
    DegenerateDivisor,
    PoleOnDivisor,
    ShapeMismatch,
    NotAClass,
    CannotCertify,
    SingularMatrix,
    Precondition,
    Domain,
    DegenerateSection,
    DegenerateCriticalPoint,
    Precision,
    NotInScope,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::UnsupportedPoint: return "unsupported-point";
    case ErrorKind::DegenerateDivisor: return "degenerate-divisor";
    case ErrorKind::PoleOnDivisor: return "pole-on-divisor";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::NotAClass: return "not-a-class";
    case ErrorKind::CannotCertify: return "cannot-certify";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateSection: return "degenerate-section";
    case ErrorKind::DegenerateCriticalPoint: return "degenerate-critical-point";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::NotInScope: return "not-in-scope";
    }
    return "unknown";
}

}  // namespace gmdet
