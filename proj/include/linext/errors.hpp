#pragma once

#include <stdexcept>
#include <string>

namespace linext {

// Construction input implies u > u after transitive closure.
class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element index outside 0..n-1.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation requires at least one alive element.
class EmptyPosetError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AlreadyDeletedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input exceeds a configured exact-computation limit.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotForestError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotMaximalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Importance function evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sequence passed as a linear extension violates the order (or is not a
// permutation of the alive elements).
class InvalidExtensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed .poset file; message carries path and line number.
class PosetParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linext
