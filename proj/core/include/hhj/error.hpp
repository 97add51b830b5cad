#pragma once

#include <stdexcept>
#include <string>

namespace hhj {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user input: unknown domain, bad degrees, malformed files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Chart evaluation outside its parameter range.
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-conforming or otherwise unusable triangulation.
class MeshError : public Error {
public:
    using Error::Error;
};

// Inverted or degenerate curved map.
class GeometryError : public Error {
public:
    using Error::Error;
};

// Factorization breakdown or residual check failure.
class SolverError : public Error {
public:
    using Error::Error;
};

// Dimension mismatch or non-finite values.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace hhj

#define HHJ_THROW_IF(cond, Type, msg) \
    do {                              \
        if (cond) throw Type(msg);    \
    } while (0)
