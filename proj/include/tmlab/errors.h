#pragma once

#include <stdexcept>
#include <string>

namespace tmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truncated, non-canonical or otherwise unparseable bit string.
class MalformedEncoding : public Error {
 public:
  using Error::Error;
};

// A search was cut off by its configuration budget. Never a wrong answer.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotDeterministic : public Error {
 public:
  using Error::Error;
};

class InvalidPair : public Error {
 public:
  using Error::Error;
};

class OracleInconsistent : public Error {
 public:
  using Error::Error;
};

class CorpusOutsideL : public Error {
 public:
  using Error::Error;
};

class ReductionFailure : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace tmlab
