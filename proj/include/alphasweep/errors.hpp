#pragma once

#include <stdexcept>
#include <string>

namespace alphasweep {

/// Malformed input: bad config keys, unparsable files, violated type invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested plan cannot be produced (e.g. start pose not in any partition).
class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alphasweep
