/**
 * @file errors.hpp
 * @brief Exception types shared across the library.
 */

#ifndef IFDI_ERRORS_HPP
#define IFDI_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ifdi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical integration step produced a non-finite state.
class PropagationDivergedError : public Error {
public:
    using Error::Error;
};

/// A pointing request with coincident position and aim point.
class DegeneratePointingError : public Error {
public:
    using Error::Error;
};

/// A fault operator was applied to a spec of a different kind.
class WrongFaultKindError : public Error {
public:
    using Error::Error;
};

/// An observer id was requested that is not present in the cost table.
class UnknownAgentError : public Error {
public:
    using Error::Error;
};

/// Candidate-set sampling found no nominal target POI for the agent.
class EmptyCandidateError : public Error {
public:
    using Error::Error;
};

/// No admissible candidate set survived threshold evaluation.
class ThresholdUnavailableError : public Error {
public:
    using Error::Error;
};

/// A scenario or telemetry file could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A scenario violated one or more type invariants.
/// Carries every violation found, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "scenario validation failed:";
        for (const auto& i : issues) {
            out += "\n  - " + i;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace ifdi

#endif
