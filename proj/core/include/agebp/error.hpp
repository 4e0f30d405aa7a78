#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace agebp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid law parameters, out-of-range arguments, violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Iterates of the fixed-point map went down somewhere; points at a quadrature bug.
class NonMonotone : public Error {
 public:
  using Error::Error;
};

class CertificateNotFound : public Error {
 public:
  using Error::Error;
};

class QuantileOverflow : public Error {
 public:
  using Error::Error;
};

class CapMemoryExceeded : public Error {
 public:
  using Error::Error;
};

class SampleTooSmall : public Error {
 public:
  using Error::Error;
};

class TerminatedInFailure : public Error {
 public:
  TerminatedInFailure(int generation, const std::string& why)
      : Error("path search failed at generation " + std::to_string(generation) + ": " + why),
        generation_(generation) {}
  int generation() const { return generation_; }

 private:
  int generation_;
};

}  // namespace agebp
