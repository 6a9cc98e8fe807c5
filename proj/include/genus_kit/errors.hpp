#pragma once

#include <stdexcept>
#include <string>

namespace gk {

// Malformed user-provided data or arguments. The C API maps it to an
// input-error status.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, int line)
        : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A rotation system, cycle family or partition that does not fit its graph.
class MismatchError : public InputError {
public:
    using InputError::InputError;
};

// Cycle family that still contains a blossom.
class BlossomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gk
