#pragma once

#include <stdexcept>
#include <string>

namespace lastmile {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed arguments: dimension mismatches, non-permutations, bad ranges.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// An operation needed an actual sequence or quality label that is absent.
class MissingLabel : public Error {
public:
  using Error::Error;
};

/// Instance too large for the exact solver; use the anytime solver instead.
class SizeExceeded : public Error {
public:
  using Error::Error;
};

/// Corpus file could not be parsed (bad JSON, wrong field types).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Corpus content violates a domain invariant (named instance and field).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Training aborted; message carries the instance id and epoch.
class TrainError : public Error {
public:
  using Error::Error;
};

}  // namespace lastmile
