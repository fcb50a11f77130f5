#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qkin/collision.hpp"
#include "qkin/constants.hpp"
#include "qkin/rng.hpp"
#include "qkin/spectro.hpp"

// Stochastic particle solver for the semi-quantum gas in a single well-mixed
// periodic cell. Reduced units: hbar = 1 and k_B = 1, so `omega` is also the
// energy quantum; masses, lengths and times are whatever the config says.
namespace qkin::engine {

using collision::Particle;
using collision::Vec3;
using spectro::RadiationMode;

// Physical -> reduced conversion for a chosen time unit. With time_s = 1/omega
// the oscillator quantum is 1, the engine default.
struct ReducedUnits {
  double time_s = 1.0;

  static ReducedUnits for_oscillator(double omega) { return {1.0 / omega}; }

  double rate(double per_second) const { return per_second * time_s; }
  double frequency(double omega) const { return omega * time_s; }
  double energy(double erg) const { return erg * time_s / cgs::hbar; }
  double temperature(double kelvin) const { return energy(cgs::boltzmann * kelvin); }
  double seconds(double reduced_time) const { return reduced_time * time_s; }
};

struct GasConfig {
  int n_particles = 1000;
  double box_length = 1.0;
  double r0 = 0.005;
  double mass = 1.0;
  double omega = 1.0;
  int n_max = 2;
  Vec3 force = Vec3::Zero();
  double dt = 1e-3;
  long steps = 1000;
  std::uint64_t seed = 1;
  bool ordering_rule = true;
  bool collisions = true;
  RadiationMode radiation_mode = RadiationMode::off;
  double spont_rate = 0.0;  // A of the 1 -> 0 transition
  double bath_temperature = 1.0;
  int n_levels = 8;         // levels covered by the radiative generator
  double initial_temperature = 1.0;
  long sample_stride = 1;
  int entropy_bins = 16;

  // Throws ConfigError naming the first offending parameter.
  void validate() const;

  double cross_section() const;
  double equilibrium_rate() const;
  collision::CollisionKernel kernel() const;
  // Radiative generator over n_levels in reduced units.
  Eigen::MatrixXd generator() const;
};

struct EnergyLedger {
  double e_kin = 0.0;
  double e_int = 0.0;
  double e_rad = 0.0;   // carried off by emitted photons
  double e_pump = 0.0;  // absorbed from the bath
  double e_work = 0.0;  // done by the external force

  // Constant over a run.
  double invariant() const { return e_kin + e_int + e_rad - e_pump - e_work; }
};

struct SimState {
  std::vector<Particle> particles;
  long step_count = 0;
  double time = 0.0;
  EnergyLedger ledger;
  Rng rng{1};
  double ntc_remainder = 0.0;
  long collisions = 0;
  long inelastic_collisions = 0;
  double max_momentum_error = 0.0;
  double max_energy_error = 0.0;  // relative, per collision
};

struct Observables {
  double t = 0.0;
  double e_kin = 0.0;
  double e_int = 0.0;
  double e_rad = 0.0;
  double e_pump = 0.0;
  double mean_n = 0.0;
  double temp_kin = 0.0;
  double entropy = 0.0;
};

// Uniform positions, Maxwellian momenta at initial_temperature, all n = 0.
SimState initialize(const GasConfig& config);

// Recomputes e_kin (correctly rounded sum) and e_int from the particles.
void refresh_ledger(SimState& state, const GasConfig& config);

// p += F dt, x += p dt / m with periodic wrap; the kinetic-energy change is
// booked as force work.
void free_flight(SimState& state, double dt, const Vec3& force, double mass,
                 double box_length);

// No-time-counter selection in one cell. Each accepted pair is distinct.
std::vector<std::pair<std::size_t, std::size_t>> select_collision_pairs(
    SimState& state, const GasConfig& config);

// Applies sample_collision to each pair in order and books the outcome.
void apply_collisions(SimState& state, const GasConfig& config,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Independent +-1 level jumps with probability rate * dt, rates read from the
// ladder generator. Levels at or above its dimension keep the ladder's
// downward scaling and have no upward channel.
void apply_radiation(SimState& state, const Eigen::MatrixXd& kappa, double dt,
                     double quantum);

Observables observables(const SimState& state, const GasConfig& config, int bins);

// Level occupation counts 0..max level.
std::vector<long> level_histogram(const SimState& state);

class Engine {
 public:
  explicit Engine(GasConfig config);
  Engine(GasConfig config, SimState state);

  // flight -> collisions -> radiation, then ledger refresh.
  void step();

  Observables observe() const { return observables(state_, config_, config_.entropy_bins); }
  // |invariant - invariant at start| / |invariant at start|.
  double ledger_drift() const;

  const GasConfig& config() const { return config_; }
  const SimState& state() const { return state_; }
  SimState& state() { return state_; }
  const Eigen::MatrixXd& kappa() const { return kappa_; }

 private:
  GasConfig config_;
  Eigen::MatrixXd kappa_;
  SimState state_;
  double invariant0_ = 0.0;
};

inline constexpr double kLedgerTolerance = 1e-9;

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const Observables& obs);
void write_histogram_record(std::ostream& out, const SimState& state);

struct RunSummary {
  EnergyLedger initial;
  EnergyLedger final;
  double max_ledger_drift = 0.0;
  bool ledger_ok = true;
  long collisions = 0;
  double max_momentum_error = 0.0;
};

// Runs config.steps steps, sampling the initial state and every
// sample_stride-th step. A histogram record is written per sample when asked.
RunSummary run(Engine& engine, std::ostream& csv, std::ostream* histogram = nullptr);

}  // namespace qkin::engine
