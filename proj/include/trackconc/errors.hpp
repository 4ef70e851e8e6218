#pragma once

#include <stdexcept>
#include <string>

namespace trackconc {

// Base class for all toolkit errors. Subclasses map onto CLI exit codes:
// everything except EmptyMarketError is an input/config problem (exit 2),
// EmptyMarketError is the empty-result condition (exit 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bytes: bad hostname, bad JSON line, bad CSV row.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally readable input that violates an invariant (duplicate rank,
// parent cycle, shares not summing to one, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Reference to an id that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Out-of-range or inconsistent parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A market with nothing in it after filtering; callers usually report this
// as "no result" rather than "bad input".
class EmptyMarketError : public Error {
 public:
  using Error::Error;
};

}  // namespace trackconc
