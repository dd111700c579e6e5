#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eigenbound {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Tokenizer and parser failures carry the character offset of the offending input.
class LexError : public Error {
public:
    LexError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    const char* kind() const noexcept override { return "lexical"; }
    std::size_t offset;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    const char* kind() const noexcept override { return "syntax"; }
    std::size_t offset;
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

class RangeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "range"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

class HypothesisError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "hypothesis"; }
};

// A measure needed to be finite but overflowed the cap.
class DivergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "divergence"; }
};

// The positivity criterion already decides lambda = 0, so the requested quantity is undefined.
class CriterionDegenerate : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "criterion_degenerate"; }
};

class DegenerationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degeneration"; }
};

class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

}  // namespace eigenbound
