#pragma once

#include <stdexcept>
#include <string>

namespace mbar {

/// A mathematically invalid request: scope gates, non-top products, bad symbols.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text (space, monomial, insertion list).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbar
