#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zdlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A model parameter violates its admissible range; the message names the parameter.
class ParamOutOfRange : public Error {
  public:
    using Error::Error;
};

/// An evaluation point lies outside the support of the density.
class OutsideSupport : public Error {
  public:
    using Error::Error;
};

/// A point lies outside the clipped window [support_low/d, 1 - support_low/d].
class OutsideWindow : public Error {
  public:
    using Error::Error;
};

/// The conditioning event has empty support (d <= 2 * support_low).
class EmptySupport : public Error {
  public:
    using Error::Error;
};

/// Quadrature failed to locate any finite contribution.
class NonFinite : public Error {
  public:
    using Error::Error;
};

/// An operation restricted to one family was called with another.
class WrongFamily : public Error {
  public:
    using Error::Error;
};

/// A model spec string or CLI value could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Conditional sampling abandoned: the pilot acceptance rate fell below the floor.
class AcceptanceTooLow : public Error {
  public:
    AcceptanceTooLow(const std::string& msg, double rate, std::uint64_t attempts)
        : Error(msg), estimated_rate(rate), pilot_attempts(attempts) {}

    double estimated_rate;
    std::uint64_t pilot_attempts;
};

}  // namespace zdlab
