#pragma once

#include <stdexcept>
#include <string>

namespace mubs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape or dimension mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

class NotUnitaryError : public Error {
public:
    using Error::Error;
};

// Input outside the domain of an operation (non-prime p, zero entry, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A family parameter for which the generator has no valid member.
class InadmissibleParameter : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Malformed input file; the message carries the location.
class FormatError : public Error {
public:
    using Error::Error;
};

class FixtureError : public Error {
public:
    using Error::Error;
};

}  // namespace mubs
