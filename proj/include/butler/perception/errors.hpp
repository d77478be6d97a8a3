#pragma once

#include <stdexcept>

namespace butler::perception {

class PerceptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The referenced frame was evicted from the registry (or never existed).
class StaleFrame : public PerceptionError {
 public:
  using PerceptionError::PerceptionError;
};

class NoTarget : public PerceptionError {
 public:
  using PerceptionError::PerceptionError;
};

class NotASurface : public PerceptionError {
 public:
  using PerceptionError::PerceptionError;
};

class OutOfBounds : public PerceptionError {
 public:
  using PerceptionError::PerceptionError;
};

}  // namespace butler::perception
