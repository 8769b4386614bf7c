#ifndef CORESHARE_ERRORS_HPP
#define CORESHARE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coreshare {

// Caller supplied something unusable: bad arguments, unknown vertices,
// size caps exceeded, malformed files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// The operation only exists for trees.
class NotATreeError : public InputError {
public:
    NotATreeError() : InputError("graph is not a tree") {}
};

// A self-check inside the library failed. Always a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace coreshare

#endif
