#pragma once

#include <stdexcept>
#include <string>

namespace finecog {

/// Base class for all errors raised by the navigation stack.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (out-of-order memory append,
/// mismatched image dimensions, double subgoal completion, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Scripted backend ran out of canned responses for a (episode, role) stream.
class ScriptExhausted : public Error {
public:
    using Error::Error;
};

/// HTTP backend failed after exhausting its retry budget.
class BackendUnavailable : public Error {
public:
    using Error::Error;
};

/// Model reply contained no parseable JSON payload.
class MalformedOutput : public Error {
public:
    using Error::Error;
};

/// Model reply parsed but did not match the role's schema.
class SchemaMismatch : public Error {
public:
    using Error::Error;
};

/// An episode had to stop early; the partial log is preserved by the caller.
class EpisodeAborted : public Error {
public:
    using Error::Error;
};

} // namespace finecog
