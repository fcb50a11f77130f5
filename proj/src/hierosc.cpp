#include "qkin/hierosc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qkin::hierosc {

void ChainSpec::validate() const {
  if (!(m0 > 0.0)) throw std::domain_error("m0 must be positive");
  if (!(k0 > 0.0)) throw std::domain_error("k0 must be positive");
  if (!(k1 > 0.0)) throw std::domain_error("k1 must be positive");
  if (!(tilde_k0 >= 0.0)) throw std::domain_error("tilde_k0 must be non-negative");
  if (n_cut < 2) throw std::domain_error("n_cut must be at least 2");
}

double ChainSpec::coarse_frequency() const { return std::sqrt(k1 / m0); }

double ChainSpec::fine_frequency() const { return std::sqrt(k0 / (0.5 * m0)); }

HierCoords to_hierarchical(std::span<const double> positions) {
  const std::size_t n = positions.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::domain_error("hierarchic transform needs a power-of-two length, got " +
                            std::to_string(n));
  HierCoords coords;
  coords.s_levels.emplace_back(positions.begin(), positions.end());
  coords.d_levels.emplace_back();
  while (coords.s_levels.back().size() > 1) {
    const auto& below = coords.s_levels.back();
    std::vector<double> s(below.size() / 2);
    std::vector<double> d(below.size() / 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = 0.5 * (below[2 * i] + below[2 * i + 1]);
      d[i] = below[2 * i] - below[2 * i + 1];
    }
    coords.s_levels.push_back(std::move(s));
    coords.d_levels.push_back(std::move(d));
  }
  return coords;
}

std::vector<double> from_hierarchical(const HierCoords& coords) {
  const int depth = coords.depth();
  if (depth < 0 || coords.d_levels.size() != coords.s_levels.size() ||
      coords.s_levels.back().size() != 1)
    throw std::domain_error("hierarchic coordinates have inconsistent level shapes");
  for (int j = 1; j <= depth; ++j)
    if (coords.d_levels[j].size() != (std::size_t{1} << (depth - j)))
      throw std::domain_error("displacement level " + std::to_string(j) + " has wrong length");

  std::vector<double> s = coords.s_levels.back();
  for (int j = depth; j >= 1; --j) {
    const auto& d = coords.d_levels[j];
    std::vector<double> below(2 * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      below[2 * i] = s[i] + 0.5 * d[i];
      below[2 * i + 1] = s[i] - 0.5 * d[i];
    }
    s = std::move(below);
  }
  return s;
}

namespace {

void require_four(std::span<const double> values, const char* what) {
  if (values.size() != 4)
    throw std::domain_error(std::string(what) + " must describe exactly 4 particles");
}

void require_two_levels(const HierCoords& coords) {
  if (coords.depth() != 2 || coords.d_levels.size() != 3 || coords.d_levels[1].size() != 2 ||
      coords.d_levels[2].size() != 1)
    throw std::domain_error("expected hierarchic coordinates of a 4-particle chain");
}

double chain_potential(const ChainSpec& spec, std::span<const double> x, bool with_interblock) {
  const double d1a = x[0] - x[1];
  const double d1b = x[2] - x[3];
  const double d2 = 0.5 * (x[0] + x[1]) - 0.5 * (x[2] + x[3]);
  double v = 0.5 * spec.k0 * (d1a * d1a + d1b * d1b) + 0.5 * spec.k1 * d2 * d2;
  if (with_interblock) v += 0.5 * spec.tilde_k0 * (x[1] - x[2]) * (x[1] - x[2]);
  return v;
}

}  // namespace

double classical_energy(const ChainSpec& spec, std::span<const double> positions,
                        std::span<const double> velocities) {
  require_four(positions, "positions");
  require_four(velocities, "velocities");
  double kinetic = 0.0;
  for (double v : velocities) kinetic += v * v;
  return 0.5 * spec.m0 * kinetic + chain_potential(spec, positions, false);
}

double decomposed_energy(const ChainSpec& spec, const HierCoords& coords,
                         const HierCoords& rates) {
  require_two_levels(coords);
  require_two_levels(rates);
  double scale = 0.0;
  for (double v : rates.s_levels[0]) scale = std::max(scale, std::abs(v));
  const double centre_velocity = rates.s_levels[2][0];
  if (std::abs(centre_velocity) > 1e-12 * std::max(scale, 1e-300))
    throw std::domain_error("decomposed energy requires zero total momentum");

  const double d2 = coords.d_levels[2][0];
  const double d2_rate = rates.d_levels[2][0];
  double fine_kinetic = 0.0;
  double fine_potential = 0.0;
  for (int i = 0; i < 2; ++i) {
    fine_kinetic += rates.d_levels[1][i] * rates.d_levels[1][i];
    fine_potential += coords.d_levels[1][i] * coords.d_levels[1][i];
  }
  return spec.m0 * d2_rate * d2_rate / 2.0 + spec.k1 / 2.0 * d2 * d2 +
         spec.m0 / 4.0 * fine_kinetic + spec.k0 / 2.0 * fine_potential;
}

double interblock_energy(const ChainSpec& spec, const HierCoords& coords) {
  require_two_levels(coords);
  const double bracket =
      coords.d_levels[2][0] - 0.5 * (coords.d_levels[1][0] + coords.d_levels[1][1]);
  return 0.5 * spec.tilde_k0 * bracket * bracket;
}

Eigen::Vector4d normal_mode_frequencies(const ChainSpec& spec, bool with_interblock) {
  spec.validate();
  // Exact Hessian of a quadratic form by polarization on unit displacements.
  const auto potential = [&](const Eigen::Vector4d& x) {
    return chain_potential(spec, std::span<const double>(x.data(), 4), with_interblock);
  };
  Eigen::Matrix4d hessian;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d ei = Eigen::Vector4d::Unit(i);
    hessian(i, i) = 2.0 * potential(ei);
    for (int j = 0; j < i; ++j) {
      const Eigen::Vector4d ej = Eigen::Vector4d::Unit(j);
      hessian(i, j) = hessian(j, i) = potential(ei + ej) - potential(ei) - potential(ej);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(hessian / spec.m0);
  // Eigenvalues at rounding level belong to the free translation mode; taking
  // their square root would inflate the noise to ~1e-8.
  Eigen::Vector4d eig = solver.eigenvalues();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * eig.cwiseAbs().maxCoeff();
  for (double& e : eig) e = e > floor ? e : 0.0;
  Eigen::Vector4d freq = eig.cwiseSqrt();
  std::sort(freq.data(), freq.data() + 4);
  return freq;
}

}  // namespace qkin::hierosc
