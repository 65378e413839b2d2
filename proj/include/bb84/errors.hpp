#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bb84 {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two reference-list entries share the same overlap value, so the
/// state-to-value map is not one-to-one.
class DegenerateAncilla : public Error {
public:
    using Error::Error;
};

/// A queried overlap value has no reference-list entry within tolerance.
class NoMatch : public Error {
public:
    using Error::Error;
};

class KeyTooShort : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class MissingEveBits : public Error {
public:
    using Error::Error;
};

/// Rejected experiment or session configuration.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Wraps a failure raised while running one session of an experiment.
class SessionError : public Error {
public:
    SessionError(std::size_t session, const std::string& what, bool invalid_config = false)
        : Error("session " + std::to_string(session) + ": " + what), session_(session),
          invalid_config_(invalid_config) {}

    std::size_t session() const noexcept { return session_; }

    /// The failure stems from the configuration (e.g. privacy parameters
    /// leave no final key) rather than from the run itself.
    bool invalid_config() const noexcept { return invalid_config_; }

private:
    std::size_t session_;
    bool invalid_config_;
};

} // namespace bb84
