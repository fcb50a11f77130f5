#include "qkin/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <unordered_set>

#include "qkin/errors.hpp"
#include "qkin/exact_sum.hpp"
#include "qkin/format.hpp"

namespace qkin::engine {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

double down_rate(const Eigen::MatrixXd& kappa, int n) {
  if (n == 0) return 0.0;
  if (n < kappa.rows()) return kappa(n - 1, n);
  return n * kappa(0, 1);
}

double up_rate(const Eigen::MatrixXd& kappa, int n) {
  if (n + 1 < kappa.rows()) return kappa(n + 1, n);
  return 0.0;
}

}  // namespace

void GasConfig::validate() const {
  require(n_particles >= 2, "n_particles must be at least 2");
  require(box_length > 0.0 && std::isfinite(box_length), "box_length must be positive");
  require(r0 >= 0.0, "r0 must be non-negative");
  require(box_length > 4.0 * r0, "box_length must exceed 4 * r0");
  require(mass > 0.0, "mass must be positive");
  require(omega > 0.0, "omega must be positive");
  require(n_max >= 0, "n_max must be non-negative");
  require(force.allFinite(), "force must be finite");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(steps >= 0, "steps must be non-negative");
  require(spont_rate >= 0.0, "spont_rate must be non-negative");
  require(n_levels >= 2, "n_levels must be at least 2");
  require(initial_temperature >= 0.0, "initial_temperature must be non-negative");
  require(sample_stride >= 1, "sample_stride must be at least 1");
  require(entropy_bins >= 4, "entropy_bins must be at least 4");
  if (radiation_mode == RadiationMode::full)
    require(bath_temperature > 0.0, "bath_temperature must be positive in full radiation mode");
  const Eigen::MatrixXd kappa = generator();
  double worst = 0.0;
  for (int n = 0; n < n_levels; ++n)
    worst = std::max(worst, (down_rate(kappa, n) + up_rate(kappa, n)) * dt);
  require(worst < 0.1, "radiative rate * dt = " + fmt12(worst) +
                           " must stay below 0.1 (reduce dt or n_levels)");
}

double GasConfig::cross_section() const { return std::numbers::pi * 4.0 * r0 * r0; }

double GasConfig::equilibrium_rate() const {
  if (radiation_mode != RadiationMode::full) return 0.0;
  return spont_rate * spectro::planck_occupation(omega / bath_temperature);
}

collision::CollisionKernel GasConfig::kernel() const {
  return {mass, omega, n_max, ordering_rule};
}

Eigen::MatrixXd GasConfig::generator() const {
  return spectro::ladder_generator(spont_rate, equilibrium_rate(), n_levels, radiation_mode);
}

SimState initialize(const GasConfig& config) {
  config.validate();
  SimState state;
  state.rng = Rng(config.seed);
  state.particles.resize(config.n_particles);
  const double sigma = std::sqrt(config.mass * config.initial_temperature);
  for (auto& particle : state.particles) {
    for (int k = 0; k < 3; ++k) particle.x[k] = config.box_length * state.rng.uniform();
    for (int k = 0; k < 3; ++k)
      particle.p[k] = sigma > 0.0 ? state.rng.normal(0.0, sigma) : 0.0;
    particle.n = 0;
  }
  refresh_ledger(state, config);
  return state;
}

void refresh_ledger(SimState& state, const GasConfig& config) {
  ExactSum kinetic;
  long quanta = 0;
  for (const auto& particle : state.particles) {
    kinetic.add(collision::kinetic_energy(particle.p, config.mass));
    quanta += particle.n;
  }
  state.ledger.e_kin = kinetic.value();
  state.ledger.e_int = config.omega * static_cast<double>(quanta);
}

void free_flight(SimState& state, double dt, const Vec3& force, double mass,
                 double box_length) {
  const Vec3 kick = force * dt;
  const bool pushed = !kick.isZero(0.0);
  ExactSum work;
  for (auto& particle : state.particles) {
    if (pushed) {
      const Vec3 before = particle.p;
      particle.p += kick;
      work.add(force.dot(before + particle.p) * dt / (2.0 * mass));
    }
    particle.x += particle.p * (dt / mass);
    for (int k = 0; k < 3; ++k) {
      double& x = particle.x[k];
      x -= box_length * std::floor(x / box_length);
      if (x >= box_length) x -= box_length;
    }
  }
  if (pushed) state.ledger.e_work += work.value();
}

std::vector<std::pair<std::size_t, std::size_t>> select_collision_pairs(
    SimState& state, const GasConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = state.particles.size();
  if (n < 2) return pairs;
  double p_max = 0.0;
  for (const auto& particle : state.particles) p_max = std::max(p_max, particle.p.norm());
  // |v_i - v_j| <= 2 max|v|, so this bound never under-counts candidates.
  const double v_rel_max = 2.0 * p_max / config.mass;
  if (v_rel_max == 0.0) return pairs;
  const double volume = std::pow(config.box_length, 3);
  const double expected = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) *
                              config.cross_section() * v_rel_max * config.dt / volume +
                          state.ntc_remainder;
  const auto candidates = static_cast<long>(std::floor(expected));
  state.ntc_remainder = expected - static_cast<double>(candidates);

  std::unordered_set<std::uint64_t> seen;
  for (long c = 0; c < candidates; ++c) {
    const std::size_t i = state.rng.below(n);
    std::size_t j = state.rng.below(n - 1);
    if (j >= i) ++j;
    const double v_rel = (state.particles[i].p - state.particles[j].p).norm() / config.mass;
    if (state.rng.uniform() * v_rel_max >= v_rel) continue;
    const auto key = static_cast<std::uint64_t>(std::min(i, j)) * n + std::max(i, j);
    if (!seen.insert(key).second) continue;
    pairs.emplace_back(i, j);
  }
  return pairs;
}

void apply_collisions(SimState& state, const GasConfig& config,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const auto kernel = config.kernel();
  for (const auto& [i, j] : pairs) {
    auto& a = state.particles[i];
    auto& b = state.particles[j];
    const auto out = collision::sample_collision(a, b, kernel, state.rng);

    const Vec3 drift = (out.p_out + out.p1_out) - (a.p + b.p);
    state.max_momentum_error = std::max(state.max_momentum_error, drift.cwiseAbs().maxCoeff());
    const double ke_in = collision::kinetic_energy(a.p, config.mass) +
                         collision::kinetic_energy(b.p, config.mass);
    const double loss = collision::delta_q(a.p, b.p, out.p_out, out.p1_out, config.mass);
    if (ke_in > 0.0) {
      const double err = std::abs(loss - out.quanta_transferred * config.omega) / ke_in;
      state.max_energy_error = std::max(state.max_energy_error, err);
    }

    a.p = out.p_out;
    b.p = out.p1_out;
    a.n = out.n_out;
    b.n = out.n1_out;
    ++state.collisions;
    if (out.quanta_transferred != 0) ++state.inelastic_collisions;
  }
}

void apply_radiation(SimState& state, const Eigen::MatrixXd& kappa, double dt,
                     double quantum) {
  if (kappa.isZero(0.0)) return;
  long emitted = 0;
  long absorbed = 0;
  for (auto& particle : state.particles) {
    const double p_down = down_rate(kappa, particle.n) * dt;
    const double p_up = up_rate(kappa, particle.n) * dt;
    if (p_down + p_up >= 0.1)
      throw ConfigError("radiative jump probability " + fmt12(p_down + p_up) + " at level " +
                        std::to_string(particle.n) + " reached 0.1; reduce dt");
    const double u = state.rng.uniform();
    if (u < p_down) {
      --particle.n;
      ++emitted;
    } else if (u < p_down + p_up) {
      ++particle.n;
      ++absorbed;
    }
  }
  state.ledger.e_rad += quantum * static_cast<double>(emitted);
  state.ledger.e_pump += quantum * static_cast<double>(absorbed);
}

Observables observables(const SimState& state, const GasConfig& config, int bins) {
  if (bins < 4) throw std::domain_error("entropy histogram needs at least 4 bins");
  Observables obs;
  const auto count = static_cast<double>(state.particles.size());
  obs.t = state.time;
  obs.e_kin = state.ledger.e_kin;
  obs.e_int = state.ledger.e_int;
  obs.e_rad = state.ledger.e_rad;
  obs.e_pump = state.ledger.e_pump;
  obs.mean_n = count > 0 ? obs.e_int / config.omega / count : 0.0;
  obs.temp_kin = count > 0 ? 2.0 * obs.e_kin / (3.0 * count) : 0.0;

  double p_max = 0.0;
  for (const auto& particle : state.particles) p_max = std::max(p_max, particle.p.norm());
  std::map<long, long> cells;
  for (const auto& particle : state.particles) {
    long bin = 0;
    if (p_max > 0.0)
      bin = std::min<long>(bins - 1, static_cast<long>(particle.p.norm() / p_max * bins));
    ++cells[static_cast<long>(particle.n) * bins + bin];
  }
  double entropy = 0.0;
  for (const auto& [cell, hits] : cells) {
    const double f = static_cast<double>(hits) / count;
    entropy -= f * std::log(f);
  }
  obs.entropy = entropy;
  return obs;
}

std::vector<long> level_histogram(const SimState& state) {
  int top = 0;
  for (const auto& particle : state.particles) top = std::max(top, particle.n);
  std::vector<long> hist(top + 1, 0);
  for (const auto& particle : state.particles) ++hist[particle.n];
  return hist;
}

Engine::Engine(GasConfig config) : Engine(config, initialize(config)) {}

Engine::Engine(GasConfig config, SimState state)
    : config_(std::move(config)), state_(std::move(state)) {
  config_.validate();
  kappa_ = config_.generator();
  refresh_ledger(state_, config_);
  invariant0_ = state_.ledger.invariant();
}

void Engine::step() {
  free_flight(state_, config_.dt, config_.force, config_.mass, config_.box_length);
  if (config_.collisions && config_.r0 > 0.0)
    apply_collisions(state_, config_, select_collision_pairs(state_, config_));
  apply_radiation(state_, kappa_, config_.dt, config_.omega);
  refresh_ledger(state_, config_);
  ++state_.step_count;
  state_.time = static_cast<double>(state_.step_count) * config_.dt;
}

double Engine::ledger_drift() const {
  const double diff = std::abs(state_.ledger.invariant() - invariant0_);
  return invariant0_ != 0.0 ? diff / std::abs(invariant0_) : diff;
}

void write_csv_header(std::ostream& out) {
  out << "t,e_kin,e_int,e_rad,e_pump,mean_n,temp_kin,entropy\n";
}

void write_csv_row(std::ostream& out, const Observables& obs) {
  out << fmt12(obs.t) << ',' << fmt12(obs.e_kin) << ',' << fmt12(obs.e_int) << ','
      << fmt12(obs.e_rad) << ',' << fmt12(obs.e_pump) << ',' << fmt12(obs.mean_n) << ','
      << fmt12(obs.temp_kin) << ',' << fmt12(obs.entropy) << '\n';
}

void write_histogram_record(std::ostream& out, const SimState& state) {
  out << "{\"t\":" << fmt12(state.time) << ",\"levels\":[";
  const auto hist = level_histogram(state);
  for (std::size_t i = 0; i < hist.size(); ++i) out << (i ? "," : "") << hist[i];
  out << "]}\n";
}

RunSummary run(Engine& engine, std::ostream& csv, std::ostream* histogram) {
  RunSummary summary;
  summary.initial = engine.state().ledger;
  const auto sample = [&] {
    write_csv_row(csv, engine.observe());
    if (histogram) write_histogram_record(*histogram, engine.state());
  };
  write_csv_header(csv);
  sample();
  const auto& config = engine.config();
  for (long s = 1; s <= config.steps; ++s) {
    engine.step();
    summary.max_ledger_drift = std::max(summary.max_ledger_drift, engine.ledger_drift());
    if (s % config.sample_stride == 0) sample();
  }
  summary.final = engine.state().ledger;
  summary.ledger_ok = summary.max_ledger_drift <= kLedgerTolerance;
  summary.collisions = engine.state().collisions;
  summary.max_momentum_error = engine.state().max_momentum_error;
  return summary;
}

}  // namespace qkin::engine
