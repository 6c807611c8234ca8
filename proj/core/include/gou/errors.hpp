#ifndef GOU_ERRORS_HPP
#define GOU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gou {

enum class ErrorCode {
    DriftViolation,
    NonPositiveDefinite,
    NonPositiveIntensity,
    ConditionAViolation,
    OutOfDomain,
    NoPositiveRoot,
    NonNegativeDriftDerivative,
    BelowX0,
    NegativeInitialValue,
    NonIntegerHorizon,
    InsufficientSamples,
    ConditionGate,
    ZeroPaths,
    InsufficientRuins,
    SyntaxError,
    UnknownKey,
    MissingSeed,
    MissingKey,
    MissingInput,
    IoError,
};

/// Base error carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(ErrorCode code, const std::string& what, int line = 0)
        : Error(code, what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace gou

#endif
