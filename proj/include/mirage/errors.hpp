#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mirage {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files or unparseable domain data (bad citation markers,
// dangling ids, schema violations in strict mode, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

// An operation was invoked on inputs that violate its stated preconditions.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Inconsistent configuration: backend capability mismatch, incompatible
// metric variants, embedding dimension mismatch, bad config files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A backend response could not be parsed into a judgment. Carries the raw
// response so callers can decide a fallback policy.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::string raw)
        : Error(msg), raw_response(std::move(raw)) {}
    std::string raw_response;
};

// Backend unreachable or protocol-level failure. Retryable.
class TransportError : public Error {
public:
    using Error::Error;
};

// The backend signalled it cannot process the request at the current media
// resolution (OOM-style). Triggers the downsampling retry loop.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Capacity errors persisted through every allowed downsampling retry.
class CapacityExhaustedError : public Error {
public:
    using Error::Error;
};

// A human-judgment backend (or similar lookup table) is missing entries the
// requested computation needs. Carries the offending ids.
class DataCompletenessError : public Error {
public:
    DataCompletenessError(const std::string& msg, std::vector<std::string> ids)
        : Error(msg), missing_ids(std::move(ids)) {}
    std::vector<std::string> missing_ids;
};

// The requested statistic is mathematically undefined for these inputs
// (e.g. Kendall's tau with every rank tied on one side).
class UndefinedResultError : public Error {
public:
    using Error::Error;
};

}  // namespace mirage
