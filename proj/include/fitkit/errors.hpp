#pragma once

#include <stdexcept>
#include <string>

namespace fitkit {

// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class NonMonotonicTime : public Error {
public:
    using Error::Error;
};

// Model formula undefined at the requested (params, t).
class DomainError : public Error {
public:
    DomainError(const std::string& msg, double t) : Error(msg), t_(t) {}
    double where() const { return t_; }

private:
    double t_;
};

class IncompleteParams : public Error {
public:
    using Error::Error;
};

class UnknownModel : public Error {
public:
    using Error::Error;
};

class TooFewPoints : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class DegenerateConfig : public Error {
public:
    using Error::Error;
};

class InitDomainError : public Error {
public:
    using Error::Error;
};

class AllStartsFailed : public Error {
public:
    using Error::Error;
};

class EmptyResiduals : public Error {
public:
    using Error::Error;
};

class ZeroVariance : public Error {
public:
    using Error::Error;
};

class NonPositiveDfe : public Error {
public:
    using Error::Error;
};

class MixedDatasets : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line) : Error(msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

}  // namespace fitkit
