#pragma once

#include <stdexcept>
#include <string>

namespace oal {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class LabelError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

// Liouvillian null space is not one-dimensional; the message names the
// disconnected supports when they could be identified.
class DegenerateSteadyStateError : public Error {
public:
  using Error::Error;
};

class StatisticsError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace oal
