#pragma once

#include <stdexcept>
#include <string>

namespace flq {

enum class ErrorCode {
    invalid_argument = 1,
    io = 2,
    parse = 3,
    validation = 4,
    generation_exhausted = 5,
    size_limit = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
    throw Error(ErrorCode::invalid_argument, message);
}

}  // namespace flq
