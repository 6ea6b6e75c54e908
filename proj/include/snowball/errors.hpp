#pragma once

#include <stdexcept>
#include <string>

namespace snowball {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text (not parseable at all). Message names the offset.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Parseable document that does not conform to the interchange schema.
/// Message names the offending field path or token.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Structurally valid input that violates an operation's preconditions
/// (unknown ids, dangling parents, size bounds, non-closed cores, ...).
class DataError : public Error {
public:
  using Error::Error;
};

}  // namespace snowball
