#pragma once

#include <stdexcept>
#include <string>

namespace hdg
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (mesh files, config files). Carries the 1-based line.
class ParseError : public Error
{
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Non-conforming or degenerate mesh connectivity.
class TopologyError : public Error
{
public:
    using Error::Error;
};

/// Invalid problem or study configuration.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Coefficient or stabilization violates a hypothesis required for assembly.
class AssemblyError : public Error
{
public:
    using Error::Error;
};

/// Factorization failure or residual above tolerance.
class SolverError : public Error
{
public:
    using Error::Error;
};

} // namespace hdg
