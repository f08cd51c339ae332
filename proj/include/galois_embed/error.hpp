#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace galois_embed {

enum class ErrorKind {
    InvalidLattice,
    InvalidPoint,
    InvalidOrder,
    InvalidSubgroup,
    NoConvergence,
    SumNotZero,
    HighMultiplicity,
    IllConditioned,
    DegenerateSection,
    AbelCheckFailed,
    InvalidAutomorphism,
    OrderCapExceeded,
    NonGenericTarget,
    ExponentMismatch,
    NonIntegralNorm,
    NotSaturated,
    InvalidMatrix,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so that
/// callers (the verifier, the CLI) can tell branch behaviour from genuine bugs.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace galois_embed
