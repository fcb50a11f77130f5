#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

// Hierarchic oscillator chain: atoms of mass m0 bound in pairs (rigidity k0),
// pairs bound to each other (rigidity k1), optional nearest-neighbour bond
// across blocks (tilde_k0) that couples the two scales.
namespace qkin::hierosc {

struct ChainSpec {
  double m0 = 1.0;
  double k0 = 0.5;
  double k1 = 4.0;
  double tilde_k0 = 0.0;
  int n_cut = 4;

  void validate() const;

  double coarse_frequency() const;  // Omega = sqrt(k1 / m0)
  double fine_frequency() const;    // omega = sqrt(k0 / mu0), mu0 = m0 / 2
};

// s_levels[0] holds the particle coordinates, s_levels[j] the centres of mass
// at level j. d_levels[j] (j >= 1) holds the in-pair displacements that
// formed level j; d_levels[0] is empty.
struct HierCoords {
  std::vector<std::vector<double>> s_levels;
  std::vector<std::vector<double>> d_levels;

  int depth() const { return static_cast<int>(s_levels.size()) - 1; }
};

// s^{j+1}_i = (s^j_{2i} + s^j_{2i+1}) / 2, d^{j+1}_i = s^j_{2i} - s^j_{2i+1}.
// Throws std::domain_error unless the length is a power of two.
HierCoords to_hierarchical(std::span<const double> positions);

// Rebuilds level 0 from the top centre of mass and every displacement level.
std::vector<double> from_hierarchical(const HierCoords& coords);

// H = m0/2 sum v^2 + k0/2 sum (d^1_i)^2 + k1/2 (d^2_0)^2 for four particles.
double classical_energy(const ChainSpec& spec, std::span<const double> positions,
                        std::span<const double> velocities);

// Scale-separated form valid at zero total momentum:
// m0 (d2')^2/2 + k1 (d2)^2/2 + m0/4 sum (d1_i')^2 + k0/2 sum (d1_i)^2.
// `rates` are the hierarchic coordinates of the velocities.
double decomposed_energy(const ChainSpec& spec, const HierCoords& coords,
                         const HierCoords& rates);

// (tilde_k0 / 2) (d^2_0 - (d^1_0 + d^1_1) / 2)^2 = (tilde_k0 / 2) (s_1 - s_2)^2.
double interblock_energy(const ChainSpec& spec, const HierCoords& coords);

// Small-oscillation frequencies of the 4-particle chain, ascending, from the
// Hessian of the potential (probed numerically) against the mass matrix.
Eigen::Vector4d normal_mode_frequencies(const ChainSpec& spec, bool with_interblock = false);

// ---- Truncated Fock space of the three modes A (coarse), a_0, a_1 (fine) ----

enum class QuantumMode {
  free,           // Omega (N_A + 1/2) + omega (N_0 + N_1 + 1)
  hermitian,      // free + number-conserving (rotating-wave) part of H_ib
  hermitian_full, // free + the complete quadratic H_ib
  scale_ordered   // free, with one-way jumps a_i^dagger A
};

QuantumMode parse_quantum_mode(std::string_view text);
std::string_view to_string(QuantumMode mode);

// Product basis |n_A, n_0, n_1>, each 0..n_cut-1, n_1 fastest.
struct FockBasis {
  int n_cut = 2;

  int dim() const { return n_cut * n_cut * n_cut; }
  int index(int n_a, int n_0, int n_1) const { return (n_a * n_cut + n_0) * n_cut + n_1; }
  int occupation(int index, int mode) const;  // mode 0 = A, 1 = a_0, 2 = a_1
};

struct FockOperator {
  FockBasis basis;
  Eigen::MatrixXd matrix;
};

struct QuantumModel {
  ChainSpec spec;
  QuantumMode mode = QuantumMode::free;
  FockOperator hamiltonian;
  std::vector<FockOperator> jumps;  // scale_ordered only
  double jump_rate = 0.0;           // gamma, with L_i = sqrt(gamma) a_i^dagger A
};

// Single-mode ladder operators embedded in the product space.
FockOperator annihilator(const FockBasis& basis, int mode);
FockOperator number_operator(const FockBasis& basis, int mode);
// Dimensionless quadrature xi = (a + a^dagger) / sqrt(2) of one mode.
FockOperator quadrature(const FockBasis& basis, int mode);

// Amplitudes multiplying (A + A^dagger) and sum_i (a_i + a_i^dagger) inside the
// inter-block bracket, and the prefactor tilde_k0 / 2 (hbar = 1).
struct CouplingCoefficients {
  double coarse = 0.0;
  double fine = 0.0;
  double strength = 0.0;
};
CouplingCoefficients coupling_coefficients(const ChainSpec& spec);

// Throws std::domain_error for n_cut < 2.
QuantumModel build_quantum_hamiltonian(const ChainSpec& spec, QuantumMode mode);

Eigen::VectorXcd fock_state(const FockBasis& basis, int n_a, int n_0, int n_1);

struct EvolutionOptions {
  double t_end = 10.0;
  int n_times = 101;
  int trajectories = 1000;  // scale_ordered ensemble size
  std::uint64_t seed = 1;
  double top_level_limit = 1e-6;
};

struct EvolutionSample {
  double t = 0.0;
  double occ_a = 0.0;
  double occ_0 = 0.0;
  double occ_1 = 0.0;
  double norm = 0.0;
  double energy = 0.0;   // <H>
  double emitted = 0.0;  // energy released by jumps so far, (Omega - omega) per jump
};

// Hermitian modes propagate exactly through the spectral decomposition of H.
// scale_ordered averages quantum-jump trajectories (waiting-time algorithm,
// closed-form no-jump decay since H and the L^dagger L are Fock-diagonal).
// Throws TruncationOverflow if any top Fock level exceeds top_level_limit.
std::vector<EvolutionSample> evolve(const QuantumModel& model, const Eigen::VectorXcd& initial,
                                    const EvolutionOptions& options);

}  // namespace qkin::hierosc
