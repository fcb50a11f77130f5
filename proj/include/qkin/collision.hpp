#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qkin/rng.hpp"

// Binary-collision kernel of the semi-quantum gas: classical translational
// motion, quantized internal oscillator levels, and the one-way transfer of
// kinetic energy into internal quanta.
namespace qkin::collision {

using Vec3 = Eigen::Vector3d;

struct Particle {
  Vec3 x = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  int n = 0;  // excitation level
};

// probs[N] is the probability that N quanta go into internal motion.
struct TransferDistribution {
  std::vector<double> probs;

  int n_eff() const { return static_cast<int>(probs.size()) - 1; }
};

struct CollisionOutcome {
  Vec3 p_out = Vec3::Zero();
  Vec3 p1_out = Vec3::Zero();
  int n_out = 0;
  int n1_out = 0;
  // Quanta moved from translation into the oscillators. Negative only when
  // the ordering rule is disabled and the pair de-excited.
  int quanta_transferred = 0;
};

struct CollisionKernel {
  double mass = 1.0;
  double quantum = 1.0;  // hbar omega
  int n_max = 1;
  // When set, internal quanta never return to translation.
  bool ordering_rule = true;

  void validate() const;
};

double kinetic_energy(const Vec3& p, double mass);

// Kinetic-energy loss (p^2 + p1^2 - p'^2 - p1'^2) / 2m of a collision.
double delta_q(const Vec3& p, const Vec3& p1, const Vec3& p_prime,
               const Vec3& p1_prime, double mass);

// Kinetic energy of the relative motion, |p - p1|^2 / (4m) for equal masses.
double relative_kinetic_energy(const Vec3& p, const Vec3& p1, double mass);

// P(N) = (N+1) / sum_{M<=N_eff} (M+1), N_eff = min(n_max, floor(e_rel / quantum)).
TransferDistribution transfer_distribution(double e_rel, double quantum, int n_max);

// Uniform choice among the N+1 splits (0,N), (1,N-1), ..., (N,0).
std::pair<int, int> partition_quanta(int n_quanta, Rng& rng);

Vec3 isotropic_direction(Rng& rng);

// One hard-sphere collision with quantized inelasticity. Total momentum is
// conserved; the remaining relative kinetic energy leaves along an isotropic
// centre-of-mass direction.
CollisionOutcome sample_collision(const Particle& a, const Particle& b,
                                  const CollisionKernel& kernel, Rng& rng);

}  // namespace qkin::collision
