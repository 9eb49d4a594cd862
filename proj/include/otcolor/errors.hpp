#pragma once

#include <stdexcept>

namespace otc {

// Error categories mirror the CLI exit codes: I/O and stream-format
// problems exit with 2, dimension and configuration problems with 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing, unreadable or unwritable files.
class IoError : public Error {
public:
    using Error::Error;
};

// Unsupported or corrupt file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

// Mismatched image/cloud extents.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid parameter values or argument combinations.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace otc
