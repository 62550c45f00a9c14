#pragma once

#include <stdexcept>
#include <string>

namespace gmc {

// Bad arguments: sizes, index sets, parameters outside their domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input that parses but does not describe a valid state (trace, Hermiticity, PSD).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension cap or enumeration size exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (family specs, partition notation, config lines).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed result failed a self-consistency check (a library bug, not user error).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gmc
