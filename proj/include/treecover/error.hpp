#ifndef TREECOVER_ERROR_HPP
#define TREECOVER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace treecover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap was exceeded (exact oracles, dense traces).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The network (or vertex set) is not connected where connectivity is required.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

/// Input data (CSV, JSON, config) does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace treecover

#endif  // TREECOVER_ERROR_HPP
