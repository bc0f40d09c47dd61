#ifndef AERONAV_ERRORS_HPP
#define AERONAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aeronav {

// Bad configuration: invalid values, unknown keys, dimension mismatches.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Action component outside the configured bounds, non-finite pose, etc.
class BoundsError : public std::runtime_error {
 public:
  explicit BoundsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Scenario generation ran out of resample attempts.
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

// No collision-free path between the requested endpoints.
class UnreachableError : public std::runtime_error {
 public:
  explicit UnreachableError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed persisted artifact (scenario file, checkpoint, log).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Command-line misuse; maps to exit code 1 in the CLI.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aeronav

#endif  // AERONAV_ERRORS_HPP
