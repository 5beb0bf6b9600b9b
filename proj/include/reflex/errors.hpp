#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace reflex {

/// Base of every error thrown by the library. `code()` is a short
/// machine-readable token; the CLI prints it verbatim on failure.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid_input", what) {}
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& what) : Error("budget_exceeded", what) {}
};

class ModulusMismatch : public Error {
public:
    explicit ModulusMismatch(const std::string& what) : Error("modulus_mismatch", what) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& what) : Error("shape_mismatch", what) {}
};

class PreconditionFailed : public Error {
public:
    explicit PreconditionFailed(const std::string& what) : Error("precondition_failed", what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

}  // namespace reflex
