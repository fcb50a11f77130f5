#pragma once

#include <stdexcept>
#include <string>

namespace qkin {

/// Invalid or inconsistent run configuration (unknown mode, rate*dt too large, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A causal site lacks a region some axiom promises (union, cutting).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fock-space evolution reached the truncation ceiling.
class TruncationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkin
