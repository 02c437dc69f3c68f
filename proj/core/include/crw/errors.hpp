#pragma once

#include <stdexcept>
#include <string>

namespace crw {

/// Raised when an argument lies outside the region where an operation is defined.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a request would exceed a configured size cap (exact computations).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedMoment : public std::invalid_argument {
 public:
  explicit UnsupportedMoment(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace crw
