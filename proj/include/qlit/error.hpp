/// @file  error.hpp
/// @brief Exception types shared by every qlit module

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlit {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable universes, or a literal/variable is
/// not part of the universe it is used with.
class UniverseError : public Error {
public:
  using Error::Error;
};

/// A world or instance does not assign every variable exactly once.
class ArityError : public Error {
public:
  using Error::Error;
};

/// An exact enumeration would exceed its configured cap.
class CapacityError : public Error {
public:
  CapacityError(const std::string &what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), _cap(cap) {}

  std::size_t cap() const noexcept { return _cap; }

private:
  std::size_t _cap;
};

/// An operation was called outside of its documented precondition, e.g. a
/// CNF that is not closed under resolution, or a formula that is valid or
/// inconsistent where consistency is required.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A circuit does not have the structure its annotation promises.
class StructureError : public Error {
public:
  StructureError(const std::string &what, std::size_t node)
      : Error("node " + std::to_string(node) + ": " + what), _node(node) {}

  std::size_t node() const noexcept { return _node; }

private:
  std::size_t _node;
};

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        _line(line), _column(column) {}

  std::size_t line() const noexcept { return _line; }
  std::size_t column() const noexcept { return _column; }

private:
  std::size_t _line;
  std::size_t _column;
};

/// A classifier query was made on a population the classifier does not decide.
class NoDecisionError : public Error {
public:
  using Error::Error;
};

/// Invalid classifier configuration (e.g. bias queries without protected
/// features).
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace qlit
