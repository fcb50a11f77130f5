#pragma once

// Gaussian-CGS physical constants (CODATA 2018 exact/recommended values).
namespace qkin::cgs {

inline constexpr double hbar = 1.054571817e-27;       // erg s
inline constexpr double speed_of_light = 2.99792458e10; // cm / s
inline constexpr double boltzmann = 1.380649e-16;     // erg / K

}  // namespace qkin::cgs
