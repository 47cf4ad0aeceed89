#pragma once

#include <stdexcept>
#include <string>

namespace braggkit {

// Malformed input that cannot be interpreted at all: bad config keys, unparsable
// numbers, singular bases, radicands that are not square-free.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Well-formed input outside an operation's domain: mixed radicands, division by
// zero, complex weights where an ordering is required, mismatched windows.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// An enumeration or table would exceed the configured hard cap.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// A requested averaging window reaches beyond the data the source certifies.
struct IncompleteDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A statistic that needs more data than the input carries.
struct UndefinedStatisticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resummation requested with no Bragg peaks to sum over.
struct EmptySpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A verification scenario whose preconditions fail before any check runs.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace braggkit
