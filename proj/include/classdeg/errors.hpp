#pragma once

#include <stdexcept>
#include <string>

namespace classdeg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed triple or measure text. Line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(int line, const std::string &message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Input that parses but is inconsistent (unknown symbol, bad probability row, ...).
class InputError : public Error {
public:
    using Error::Error;
};

// The operation is mathematically undefined on this input
// (degree of an infinite-to-one code, Parry measure of a reducible shift, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace classdeg
