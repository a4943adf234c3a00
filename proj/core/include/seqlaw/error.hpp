#pragma once

#include <stdexcept>
#include <string>

namespace seqlaw {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (stripped lines, b-files, entry records, tables).
class ParseError : public Error {
public:
    using Error::Error;
};

// Semantically invalid data: shape mismatches, undefined distances,
// empty inputs where values are required.
class DataError : public Error {
public:
    using Error::Error;
};

// A regression whose x values carry no spread, or a RANSAC run that
// found no consensus set.
class DegenerateFitError : public DataError {
public:
    using DataError::DataError;
};

// Bad configuration or command-line usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

} // namespace seqlaw
