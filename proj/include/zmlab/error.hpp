#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zmlab {

// Numeric values are shared with the C API (ZMLAB_E_*).
enum class ErrorCode : int {
    Ok = 0,
    UnknownSymbol = 1,
    EmptyReference = 2,
    BadLength = 3,
    EmptyInput = 4,
    DegenerateN = 5,
    InvalidModel = 6,
    TruncationTooTight = 7,
    NotIrreducible = 8,
    BadGamma = 9,
    AlphabetMismatch = 10,
    TooLarge = 11,
    GridMissing = 12,
    ConfigError = 13,
    IoError = 14,
    InvalidArgument = 15,
    Internal = 99,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace zmlab
