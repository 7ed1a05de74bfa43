#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeRadicand : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class SingularBasis : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class InadmissibleSpec : public Error {
 public:
  using Error::Error;
};

class InadmissiblePsi : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class TripleSwitchViolated : public Error {
 public:
  using Error::Error;
};

class SignLawViolated : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A runtime re-check of the induction step failed. `check()` names the
/// violated statement ("condition-4", "statement-6", "nesting", ...).
class StepVerificationFailed : public Error {
 public:
  StepVerificationFailed(std::string check, const std::string& detail)
      : Error("step verification failed [" + check + "]: " + detail),
        check_(std::move(check)),
        detail_(detail) {}

  const std::string& check() const noexcept { return check_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string check_;
  std::string detail_;
};

}  // namespace dioph
