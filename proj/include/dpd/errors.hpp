#pragma once

#include <stdexcept>
#include <string>

namespace dpd {

/// Invalid user-facing configuration (bad parameter, cutoff too large, ...).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A pair list was used after particles moved beyond what the skin permits.
class StalePairListError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Trajectory blew up: non-finite coordinates or runaway kinetic temperature.
class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(long step, const std::string& what)
        : std::runtime_error("diverged at step " + std::to_string(step) + ": " + what),
          step_(step) {}

    long step() const { return step_; }

  private:
    long step_;
};

}  // namespace dpd
