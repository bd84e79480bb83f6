#pragma once

#include <stdexcept>
#include <string>

namespace orl {

// Invalid or inconsistent configuration (bad distribution, grid too small, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An action that the current action mask forbids was applied.
class InfeasibleAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An episode inside a benchmark failed; carries the episode index.
class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(std::size_t episode, const std::string& what)
      : std::runtime_error("episode " + std::to_string(episode) + ": " + what),
        episode_(episode) {}

  std::size_t episode() const noexcept { return episode_; }

 private:
  std::size_t episode_;
};

}  // namespace orl
