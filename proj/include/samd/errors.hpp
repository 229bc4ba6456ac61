#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace samd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasiblePoint : public Error {
public:
    using Error::Error;
};

/// The minimizer sits on (or too close to) the boundary of the feasible set,
/// so no dual anchor z* with grad_psi_star(z*) = x* exists.
class BoundaryMinimizer : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NonPositiveTime : public Error {
public:
    using Error::Error;
};

class InvalidRegime : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class StrideTooCoarse : public Error {
public:
    using Error::Error;
};

class NonPositiveValues : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Carries every violated constraint found while validating a configuration.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid configuration:";
        for (const auto& item : items) {
            out += "\n  - " + item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

}  // namespace samd
