#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace malpha {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// S_M is undefined: m*alpha landed exactly on an integer or half-integer.
class DegenerateRational : public Error {
 public:
  using Error::Error;
};

// A finite expansion ended before the requested depth.
class ExpansionExhausted : public Error {
 public:
  ExpansionExhausted(const std::string& what, std::size_t available)
      : Error(what), available_(available) {}
  std::size_t available() const noexcept { return available_; }

 private:
  std::size_t available_;
};

// A RandomDyadic quotient past the certified validity horizon was requested.
class HorizonExceeded : public Error {
 public:
  HorizonExceeded(const std::string& what, std::size_t horizon)
      : Error(what), horizon_(horizon) {}
  std::size_t horizon() const noexcept { return horizon_; }

 private:
  std::size_t horizon_;
};

// Surd cycle search gave up; the input was not normalized.
class CycleNotFound : public Error {
 public:
  using Error::Error;
};

// A growth rule produced a quotient above its configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// A caller-supplied deadline passed before the computation finished.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace malpha
