#include "galois_embed/error.hpp"

namespace galois_embed {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidLattice: return "InvalidLattice";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidSubgroup: return "InvalidSubgroup";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SumNotZero: return "SumNotZero";
    case ErrorKind::HighMultiplicity: return "HighMultiplicity";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::DegenerateSection: return "DegenerateSection";
    case ErrorKind::AbelCheckFailed: return "AbelCheckFailed";
    case ErrorKind::InvalidAutomorphism: return "InvalidAutomorphism";
    case ErrorKind::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorKind::NonGenericTarget: return "NonGenericTarget";
    case ErrorKind::ExponentMismatch: return "ExponentMismatch";
    case ErrorKind::NonIntegralNorm: return "NonIntegralNorm";
    case ErrorKind::NotSaturated: return "NotSaturated";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace galois_embed
