#pragma once

#include <stdexcept>
#include <string>

namespace gbl {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid instance data: malformed input, dimension mismatch, rejected
/// norm specification, singular or ill-conditioned basis matrix.
class InstanceError : public Error {
public:
    using Error::Error;
};

/// A caller violated an operation precondition (e.g. passed a selection
/// that is not a valid greedy set, or an out-of-range index).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace gbl
