#include "qkin/spectro.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkin/errors.hpp"

namespace qkin::spectro {

void OscillatorSpec::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::domain_error("omega must be a positive finite frequency");
  if (!(dipole >= 0.0) || !std::isfinite(dipole))
    throw std::domain_error("dipole must be non-negative");
  if (n_levels < 2) throw std::domain_error("n_levels must be at least 2");
}

RadiationMode parse_radiation_mode(std::string_view text) {
  if (text == "off") return RadiationMode::off;
  if (text == "spontaneous" || text == "spontaneous-only" || text == "spontaneous_only")
    return RadiationMode::spontaneous_only;
  if (text == "full") return RadiationMode::full;
  throw ConfigError("unknown radiation mode '" + std::string(text) +
                    "' (expected off, spontaneous-only or full)");
}

std::string_view to_string(RadiationMode mode) {
  switch (mode) {
    case RadiationMode::off: return "off";
    case RadiationMode::spontaneous_only: return "spontaneous-only";
    case RadiationMode::full: return "full";
  }
  return "unknown";
}

double boltzmann_ratio(double e_j, double e_k, double t, double k_boltzmann) {
  if (!(t > 0.0)) throw std::domain_error("temperature must be positive");
  return std::exp(-(e_j - e_k) / (k_boltzmann * t));
}

double planck_occupation(double x) { return 1.0 / std::expm1(x); }

double spontaneous_rate(const OscillatorSpec& spec) {
  spec.validate();
  const double c = cgs::speed_of_light;
  const double w = spec.omega;
  return 4.0 * w * w * w * spec.dipole * spec.dipole / (3.0 * cgs::hbar * c * c * c);
}

double equilibrium_rate(const OscillatorSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("temperature must be positive");
  const double x = cgs::hbar * spec.omega / (cgs::boltzmann * t);
  return spontaneous_rate(spec) * planck_occupation(x);
}

Eigen::MatrixXd ladder_generator(double a_spont, double k_eq, int n_levels,
                                 RadiationMode mode) {
  if (n_levels < 2) throw std::domain_error("n_levels must be at least 2");
  if (a_spont < 0.0 || k_eq < 0.0) throw std::domain_error("rates must be non-negative");
  Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(n_levels, n_levels);
  if (mode == RadiationMode::off) return kappa;
  const double k = mode == RadiationMode::full ? k_eq : 0.0;
  for (int n = 0; n < n_levels; ++n) {
    if (n > 0) kappa(n - 1, n) = n * (a_spont + k);
    if (n + 1 < n_levels) kappa(n + 1, n) = (n + 1) * k;
  }
  for (int n = 0; n < n_levels; ++n) {
    double out = 0.0;
    for (int m = 0; m < n_levels; ++m)
      if (m != n) out += kappa(m, n);
    kappa(n, n) = -out;
  }
  return kappa;
}

Eigen::MatrixXd relaxation_generator(const OscillatorSpec& spec, double t,
                                     RadiationMode mode) {
  spec.validate();
  if (mode == RadiationMode::off) return ladder_generator(0.0, 0.0, spec.n_levels, mode);
  const double a = spontaneous_rate(spec);
  const double k = mode == RadiationMode::full ? equilibrium_rate(spec, t) : 0.0;
  return ladder_generator(a, k, spec.n_levels, mode);
}

RateSet compute_rates(const OscillatorSpec& spec, double t, RadiationMode mode) {
  spec.validate();
  RateSet rates;
  const double quantum = cgs::hbar * spec.omega;
  rates.boltzmann = boltzmann_ratio(quantum, 0.0, t);
  rates.a_spont = spontaneous_rate(spec);
  rates.k_eq = equilibrium_rate(spec, t);
  rates.kappa = relaxation_generator(spec, t, mode);
  return rates;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& kappa) {
  const auto n = kappa.rows();
  if (n == 0 || kappa.cols() != n) throw std::domain_error("generator must be square");
  // Grassmann-Taksar-Heyman state reduction on rate(i, j) = kappa(j, i).
  // It never subtracts, so populations many orders below the ground level
  // keep full relative accuracy.
  Eigen::MatrixXd rate = kappa.transpose();
  bool reducible = true;
  for (auto k = n - 1; k > 0 && reducible; --k) {
    const double out = rate.row(k).head(k).sum();
    if (!(out > 0.0)) {
      reducible = false;
      break;
    }
    rate.col(k).head(k) /= out;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        if (i != j) rate(i, j) += rate(i, k) * rate(k, j);
  }
  if (reducible) {
    Eigen::VectorXd f(n);
    f(0) = 1.0;
    for (Eigen::Index k = 1; k < n; ++k) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) acc += f(i) * rate(i, k);
      f(k) = acc;
    }
    return f / f.sum();
  }
  // Some state has no way down: fall back to the balance equations with the
  // normalization replacing the last row.
  Eigen::MatrixXd system = kappa;
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  return system.fullPivLu().solve(rhs);
}

}  // namespace qkin::spectro
