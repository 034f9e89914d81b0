#pragma once

#include <stdexcept>
#include <string>

namespace hmlab {

// Invalid builder parameters (mesh level, grid resolution, bad config file).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A map is too coarse for the mesh to resolve (degree, bubble insertion).
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Endpoint maps are not homotopic (unequal degree).
struct TopologyError : std::runtime_error {
  explicit TopologyError(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated precondition of an operation does not hold for the inputs.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs that make an operation meaningless (e.g. a vanishing norm bound).
struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hmlab
