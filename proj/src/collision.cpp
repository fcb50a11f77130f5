#include "qkin/collision.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qkin/errors.hpp"
#include "qkin/exact_sum.hpp"

namespace qkin::collision {

void CollisionKernel::validate() const {
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  if (!(quantum > 0.0)) throw ConfigError("omega must be positive");
  if (n_max < 0) throw ConfigError("n_max must be non-negative");
}

double kinetic_energy(const Vec3& p, double mass) {
  return (p.x() * p.x() + p.y() * p.y() + p.z() * p.z()) / (2.0 * mass);
}

double delta_q(const Vec3& p, const Vec3& p1, const Vec3& p_prime,
               const Vec3& p1_prime, double mass) {
  return (p.squaredNorm() + p1.squaredNorm() - p_prime.squaredNorm() -
          p1_prime.squaredNorm()) /
         (2.0 * mass);
}

double relative_kinetic_energy(const Vec3& p, const Vec3& p1, double mass) {
  return (p - p1).squaredNorm() / (4.0 * mass);
}

TransferDistribution transfer_distribution(double e_rel, double quantum, int n_max) {
  if (!(e_rel >= 0.0)) throw std::domain_error("relative kinetic energy must be non-negative");
  if (!(quantum > 0.0)) throw std::domain_error("energy quantum must be positive");
  if (n_max < 0) throw std::domain_error("n_max must be non-negative");
  const double fits = std::floor(e_rel / quantum);
  const int n_eff = fits >= n_max ? n_max : static_cast<int>(fits);
  TransferDistribution dist;
  dist.probs.resize(n_eff + 1);
  const double norm = 0.5 * (n_eff + 1.0) * (n_eff + 2.0);
  for (int n = 0; n <= n_eff; ++n) dist.probs[n] = (n + 1.0) / norm;
  return dist;
}

std::pair<int, int> partition_quanta(int n_quanta, Rng& rng) {
  if (n_quanta < 0) throw std::domain_error("quanta count must be non-negative");
  if (n_quanta == 0) return {0, 0};
  const int dn_a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_quanta) + 1));
  return {dn_a, n_quanta - dn_a};
}

Vec3 isotropic_direction(Rng& rng) {
  const double cos_theta = 2.0 * rng.uniform() - 1.0;
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

namespace {

int draw_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i);
    u -= weights[i];
  }
  return static_cast<int>(weights.size()) - 1;
}

// Signed quanta change of the pair. Ordering rule: draw from the transfer
// distribution. Without it, back-transfer out of the pair's own quanta is
// admitted with the mirrored weight |N| + 1.
int draw_transfer(const Particle& a, const Particle& b, double e_rel,
                  const CollisionKernel& kernel, Rng& rng) {
  const TransferDistribution up = transfer_distribution(e_rel, kernel.quantum, kernel.n_max);
  if (kernel.ordering_rule) return draw_index(up.probs, rng);
  const int down_cap = std::min(kernel.n_max, a.n + b.n);
  std::vector<double> weights;
  for (int n = -down_cap; n <= up.n_eff(); ++n) weights.push_back(std::abs(n) + 1.0);
  return draw_index(weights, rng) - down_cap;
}

std::pair<int, int> split_release(int quanta, int n_a, int n_b, Rng& rng) {
  const int lo = std::max(0, quanta - n_b);
  const int hi = std::min(n_a, quanta);
  const int from_a = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo) + 1));
  return {-from_a, -(quanta - from_a)};
}

}  // namespace

CollisionOutcome sample_collision(const Particle& a, const Particle& b,
                                  const CollisionKernel& kernel, Rng& rng) {
  CollisionOutcome out{a.p, b.p, a.n, b.n, 0};
  const Vec3 total = a.p + b.p;
  const Vec3 relative = 0.5 * (a.p - b.p);
  if (relative.isZero(0.0)) return out;

  const double m = kernel.mass;
  const double e_rel = relative.squaredNorm() / m;
  const int transfer = draw_transfer(a, b, e_rel, kernel, rng);
  const auto [dn_a, dn_b] = transfer >= 0 ? partition_quanta(transfer, rng)
                                          : split_release(-transfer, a.n, b.n, rng);
  out.n_out = a.n + dn_a;
  out.n1_out = b.n + dn_b;
  out.quanta_transferred = transfer;

  const double e_after = std::max(0.0, e_rel - transfer * kernel.quantum);
  const Vec3 direction = isotropic_direction(rng);
  double magnitude = std::sqrt(m * e_after);
  const double ke_in_a = kinetic_energy(a.p, m);
  const double ke_in_b = kinetic_energy(b.p, m);
  for (int attempt = 0;; ++attempt) {
    out.p_out = 0.5 * total + magnitude * direction;
    out.p1_out = total - out.p_out;
    if (!kernel.ordering_rule || transfer > 0) break;
    // Elastic outcomes must not gain energy through rounding.
    const std::array<double, 4> change{kinetic_energy(out.p_out, m), kinetic_energy(out.p1_out, m),
                                       -ke_in_a, -ke_in_b};
    if (exact_sum(change) <= 0.0 || magnitude == 0.0) break;
    magnitude *= 1.0 - std::ldexp(1.0, -52 + std::min(attempt, 40));
  }
  return out;
}

}  // namespace qkin::collision
