#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace treevrpsd {

enum class ErrorCode {
    CycleOrForest,
    NonpositiveLength,
    BadCapacity,
    UnknownVertex,
    InvalidOrder,
    MassAtZero,
    OutOfRange,
    NotNormalized,
    NegativeMass,
    DuplicateKey,
    InconsistentRealization,
    TooLarge,
    SyntaxError,
    SchemaError,
    BadParams,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every validation and resource failure in the library is reported as an Error
/// carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace treevrpsd
