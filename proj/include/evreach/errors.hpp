#pragma once

#include <stdexcept>
#include <string>

namespace evreach {

// Input files that cannot be read or parsed at all.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: missing vehicles, zero hubs, non-positive powers, ...
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid configuration but impossible data conditions (e.g. a scenario with
// zero non-hub communities).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Guard rails on test-only machinery (oracle node cap).
class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evreach
