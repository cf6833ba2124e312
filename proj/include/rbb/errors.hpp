#pragma once

#include <stdexcept>

namespace rbb {

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sample violates a hypothesis the statistic needs, e.g. every excursion
// block has the same observable sum so the bootstrap variance is zero.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Power iteration or another fixed-point solve did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A trajectory or table would exceed a configured size cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The trajectory holds fewer returns of its initial string than requested.
class InsufficientReturnsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rbb
