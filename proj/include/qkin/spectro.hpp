#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "qkin/constants.hpp"

// Radiative quantities of a molecular vibrational oscillator: level
// populations, Einstein rates and the level-to-level relaxation generator.
// Inputs are Gaussian-CGS with temperatures in kelvin unless noted.
namespace qkin::spectro {

struct OscillatorSpec {
  double omega = 0.0;   // rad / s
  double dipole = 0.0;  // 1->0 transition dipole, esu cm
  int n_levels = 2;

  // Throws std::domain_error naming the offending field.
  void validate() const;
};

enum class RadiationMode { off, spontaneous_only, full };

// Accepts "off", "spontaneous", "spontaneous-only", "full". Throws ConfigError.
RadiationMode parse_radiation_mode(std::string_view text);
std::string_view to_string(RadiationMode mode);

struct RateSet {
  double boltzmann = 0.0;  // n_1 / n_0 at the bath temperature
  double k_eq = 0.0;       // 1 / s
  double a_spont = 0.0;    // 1 / s
  Eigen::MatrixXd kappa;   // df/dt = kappa f, columns sum to zero
};

// exp(-(e_j - e_k) / (k_B t)). Pass k_boltzmann = 1 for reduced units.
double boltzmann_ratio(double e_j, double e_k, double t,
                       double k_boltzmann = cgs::boltzmann);

// Planck occupation 1 / (exp(x) - 1) of a mode with hbar*omega / (k_B t) = x.
double planck_occupation(double x);

// A = 4 omega^3 d^2 / (3 hbar c^3).
double spontaneous_rate(const OscillatorSpec& spec);

// k = A / (exp(hbar omega / k_B t) - 1).
double equilibrium_rate(const OscillatorSpec& spec, double t);

// Harmonic dipole ladder over levels 0..n_levels-1: |d_{n,n-1}|^2 = n d^2, so
// n -> n-1 proceeds at n (A + k) and n -> n+1 at (n+1) k. Spontaneous-only
// drops the thermal terms, off gives the zero matrix. Units follow the rates.
Eigen::MatrixXd ladder_generator(double a_spont, double k_eq, int n_levels,
                                 RadiationMode mode);

// Ladder generator from physical parameters. The temperature is only read in
// full mode, where it must be positive.
Eigen::MatrixXd relaxation_generator(const OscillatorSpec& spec, double t,
                                     RadiationMode mode);

RateSet compute_rates(const OscillatorSpec& spec, double t,
                      RadiationMode mode = RadiationMode::full);

// Normalized null vector of a generator (kappa f = 0, sum f = 1) by GTH state
// reduction, which keeps full relative accuracy in the smallest populations.
// Generators where some state cannot be eliminated use a pivoted LU solve.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& kappa);

}  // namespace qkin::spectro
