#include "treevrpsd/error.hpp"

namespace treevrpsd {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::CycleOrForest: return "CycleOrForest";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::BadCapacity: return "BadCapacity";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::MassAtZero: return "MassAtZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::InconsistentRealization: return "InconsistentRealization";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BadParams: return "BadParams";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what)
{
}

} // namespace treevrpsd
