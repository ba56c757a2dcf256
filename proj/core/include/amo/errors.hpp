#pragma once

#include <stdexcept>
#include <string>

namespace amo {

// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |trace| >= 2 (up to the near-parabolic guard): no fixed point in H.
class NotElliptic : public Error {
 public:
  using Error::Error;
};

class DegenerateQ : public Error {
 public:
  using Error::Error;
};

class NonReduced : public Error {
 public:
  using Error::Error;
};

class OutsideSpectrum : public Error {
 public:
  using Error::Error;
};

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class BigOverflow : public Error {
 public:
  using Error::Error;
};

class WindowTooLarge : public Error {
 public:
  using Error::Error;
};

class StepBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace amo
