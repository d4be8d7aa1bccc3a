#pragma once

#include <stdexcept>
#include <string>

namespace uwh {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid scenario or vehicle configuration. The message carries the key path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A penalty or weight hit its singular boundary (collision, coincident agents).
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Acoustic signal can never reach a receiver that outruns it.
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requested on an object in the wrong state (empty buffer, ...).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Precondition about the game phase violated (e.g. terminal value mid-game).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Backward Riccati integration blew up.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace uwh
