#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fejercert {

// Evaluation outside the domain where a value is defined or computable.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter outside its admissible range.
class RangeError : public std::invalid_argument {
 public:
  RangeError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Evaluation budget exhausted where a lower bound is not an acceptable answer.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario/configuration problem. `pointer` is a JSON pointer into the document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace fejercert
