#pragma once

#include <stdexcept>
#include <string>

namespace floqent {

// Bad input: malformed parameters, unknown identifiers, schema violations.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical method could not deliver a result within its stated tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace floqent
