#pragma once

#include <stdexcept>
#include <string>

namespace tcflow {

/// Input or configuration that violates a precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// File-system or parse failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

}  // namespace tcflow
