#pragma once

#include <stdexcept>
#include <string>

namespace longdiff {

enum class ErrorCode {
    InvalidArgument,
    ShapeMismatch,
    NonFinite,
    BadMagic,
    Truncated,
    CorruptFile,
    Unsupported,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures surface as this exception. The CLI maps Io to exit
// code 2 and every other code to exit code 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    bool is_io() const noexcept { return code_ == ErrorCode::Io; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::InvalidArgument) {
    if (!cond) throw Error(code, what);
}

}  // namespace longdiff
