#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "qkin/errors.hpp"
#include "qkin/hierosc.hpp"
#include "qkin/rng.hpp"

namespace qkin::hierosc {

QuantumMode parse_quantum_mode(std::string_view text) {
  if (text == "free") return QuantumMode::free;
  if (text == "hermitian") return QuantumMode::hermitian;
  if (text == "hermitian_full" || text == "hermitian-full") return QuantumMode::hermitian_full;
  if (text == "scale_ordered" || text == "scale-ordered") return QuantumMode::scale_ordered;
  throw ConfigError("unknown hier-osc mode '" + std::string(text) +
                    "' (expected free, hermitian, hermitian_full or scale_ordered)");
}

std::string_view to_string(QuantumMode mode) {
  switch (mode) {
    case QuantumMode::free: return "free";
    case QuantumMode::hermitian: return "hermitian";
    case QuantumMode::hermitian_full: return "hermitian_full";
    case QuantumMode::scale_ordered: return "scale_ordered";
  }
  return "unknown";
}

int FockBasis::occupation(int index, int mode) const {
  switch (mode) {
    case 0: return index / (n_cut * n_cut);
    case 1: return (index / n_cut) % n_cut;
    default: return index % n_cut;
  }
}

FockOperator annihilator(const FockBasis& basis, int mode) {
  FockOperator op{basis, Eigen::MatrixXd::Zero(basis.dim(), basis.dim())};
  for (int k = 0; k < basis.dim(); ++k) {
    const int n = basis.occupation(k, mode);
    if (n == 0) continue;
    const int stride = mode == 0 ? basis.n_cut * basis.n_cut : mode == 1 ? basis.n_cut : 1;
    op.matrix(k - stride, k) = std::sqrt(static_cast<double>(n));
  }
  return op;
}

FockOperator number_operator(const FockBasis& basis, int mode) {
  FockOperator op{basis, Eigen::MatrixXd::Zero(basis.dim(), basis.dim())};
  for (int k = 0; k < basis.dim(); ++k) op.matrix(k, k) = basis.occupation(k, mode);
  return op;
}

FockOperator quadrature(const FockBasis& basis, int mode) {
  const Eigen::MatrixXd a = annihilator(basis, mode).matrix;
  return {basis, (a + a.transpose()) / std::sqrt(2.0)};
}

CouplingCoefficients coupling_coefficients(const ChainSpec& spec) {
  const double mu0 = 0.5 * spec.m0;
  return {0.5 / std::pow(spec.k1 * spec.m0, 0.25), 0.25 / std::pow(spec.k0 * mu0, 0.25),
          0.5 * spec.tilde_k0};
}

QuantumModel build_quantum_hamiltonian(const ChainSpec& spec, QuantumMode mode) {
  spec.validate();
  const FockBasis basis{spec.n_cut};
  const int dim = basis.dim();
  const double big = spec.coarse_frequency();
  const double small = spec.fine_frequency();

  QuantumModel model;
  model.spec = spec;
  model.mode = mode;
  model.hamiltonian = {basis, Eigen::MatrixXd::Zero(dim, dim)};
  Eigen::MatrixXd& h = model.hamiltonian.matrix;
  for (int k = 0; k < dim; ++k)
    h(k, k) = big * (basis.occupation(k, 0) + 0.5) +
              small * (basis.occupation(k, 1) + basis.occupation(k, 2) + 1.0);

  const auto c = coupling_coefficients(spec);
  const Eigen::MatrixXd a_coarse = annihilator(basis, 0).matrix;
  const Eigen::MatrixXd a_fine[2] = {annihilator(basis, 1).matrix, annihilator(basis, 2).matrix};

  switch (mode) {
    case QuantumMode::free:
      break;
    case QuantumMode::hermitian: {
      const Eigen::MatrixXd ac_t = a_coarse.transpose();
      Eigen::MatrixXd part = c.coarse * c.coarse * (a_coarse * ac_t + ac_t * a_coarse);
      for (int i = 0; i < 2; ++i) {
        part -= 2.0 * c.coarse * c.fine * (ac_t * a_fine[i] + a_coarse * a_fine[i].transpose());
        for (int j = 0; j < 2; ++j)
          part += c.fine * c.fine *
                  (a_fine[i] * a_fine[j].transpose() + a_fine[i].transpose() * a_fine[j]);
      }
      h += c.strength * part;
      break;
    }
    case QuantumMode::hermitian_full: {
      Eigen::MatrixXd bracket = c.coarse * (a_coarse + a_coarse.transpose());
      for (int i = 0; i < 2; ++i) bracket -= c.fine * (a_fine[i] + a_fine[i].transpose());
      h += c.strength * bracket * bracket;
      break;
    }
    case QuantumMode::scale_ordered: {
      // Rate equals the magnitude of the a_i^dagger A coefficient in H_ib.
      model.jump_rate = 2.0 * c.strength * c.coarse * c.fine;
      for (int i = 0; i < 2; ++i)
        model.jumps.push_back(
            {basis, std::sqrt(model.jump_rate) * a_fine[i].transpose() * a_coarse});
      break;
    }
  }
  return model;
}

Eigen::VectorXcd fock_state(const FockBasis& basis, int n_a, int n_0, int n_1) {
  for (int n : {n_a, n_0, n_1})
    if (n < 0 || n >= basis.n_cut)
      throw std::domain_error("Fock occupation " + std::to_string(n) + " outside n_cut = " +
                              std::to_string(basis.n_cut));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
  psi(basis.index(n_a, n_0, n_1)) = 1.0;
  return psi;
}

namespace {

struct Moments {
  double occ[3] = {0.0, 0.0, 0.0};
  double top[3] = {0.0, 0.0, 0.0};
  double norm2 = 0.0;
};

Moments moments(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  Moments m;
  for (int k = 0; k < basis.dim(); ++k) {
    const double w = std::norm(psi(k));
    m.norm2 += w;
    for (int mode = 0; mode < 3; ++mode) {
      const int n = basis.occupation(k, mode);
      m.occ[mode] += w * n;
      if (n == basis.n_cut - 1) m.top[mode] += w;
    }
  }
  return m;
}

void check_headroom(const FockBasis& basis, const Moments& m, double limit, double t) {
  static constexpr const char* names[3] = {"A", "a_0", "a_1"};
  for (int mode = 0; mode < 3; ++mode)
    if (m.top[mode] / m.norm2 > limit)
      throw TruncationOverflow("mode " + std::string(names[mode]) + " holds probability " +
                               std::to_string(m.top[mode] / m.norm2) + " in its top level at t = " +
                               std::to_string(t) + "; raise n_cut (currently " +
                               std::to_string(basis.n_cut) + ")");
}

double grid_time(const EvolutionOptions& options, int g) {
  return options.n_times == 1 ? 0.0 : options.t_end * g / (options.n_times - 1);
}

double expectation(const Eigen::MatrixXd& op, const Eigen::VectorXcd& psi) {
  return (psi.adjoint() * (op.cast<std::complex<double>>() * psi))(0).real();
}

std::vector<EvolutionSample> evolve_unitary(const QuantumModel& model,
                                            const Eigen::VectorXcd& initial,
                                            const EvolutionOptions& options) {
  const FockBasis& basis = model.hamiltonian.basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.hamiltonian.matrix);
  const Eigen::MatrixXcd vectors = solver.eigenvectors().cast<std::complex<double>>();
  const Eigen::VectorXd& levels = solver.eigenvalues();
  const Eigen::VectorXcd amplitudes = vectors.adjoint() * initial;

  std::vector<EvolutionSample> out;
  for (int g = 0; g < options.n_times; ++g) {
    const double t = grid_time(options, g);
    Eigen::VectorXcd phased(amplitudes.size());
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k)
      phased(k) = amplitudes(k) * std::polar(1.0, -levels(k) * t);
    const Eigen::VectorXcd psi = vectors * phased;
    const Moments m = moments(basis, psi);
    check_headroom(basis, m, options.top_level_limit, t);
    out.push_back({t, m.occ[0], m.occ[1], m.occ[2], std::sqrt(m.norm2),
                   expectation(model.hamiltonian.matrix, psi), 0.0});
  }
  return out;
}

bool is_diagonal(const Eigen::MatrixXd& m) {
  return (m - Eigen::MatrixXd(m.diagonal().asDiagonal())).isZero(0.0);
}

// Unnormalized no-jump norm after time tau.
double surviving_norm(const Eigen::VectorXcd& psi, const Eigen::VectorXd& decay, double tau) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    total += std::norm(psi(k)) * std::exp(-decay(k) * tau);
  return total;
}

double waiting_time(const Eigen::VectorXcd& psi, const Eigen::VectorXd& decay, double target) {
  double stuck = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    if (decay(k) == 0.0) stuck += std::norm(psi(k));
  if (stuck >= target) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 1.0 / std::max(decay.maxCoeff(), 1e-300);
  while (surviving_norm(psi, decay, hi) > target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (surviving_norm(psi, decay, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

Eigen::VectorXcd drift(const Eigen::VectorXcd& psi, const Eigen::VectorXd& energy,
                       const Eigen::VectorXd& decay, double tau) {
  Eigen::VectorXcd out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    out(k) = psi(k) * std::exp(std::complex<double>(-0.5 * decay(k) * tau, -energy(k) * tau));
  return out;
}

std::vector<EvolutionSample> evolve_jumps(const QuantumModel& model,
                                          const Eigen::VectorXcd& initial,
                                          const EvolutionOptions& options) {
  const FockBasis& basis = model.hamiltonian.basis;
  const Eigen::MatrixXd& h = model.hamiltonian.matrix;
  Eigen::MatrixXd loss = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (const auto& jump : model.jumps) loss += jump.matrix.transpose() * jump.matrix;
  if (!is_diagonal(h) || !is_diagonal(loss))
    throw std::logic_error("jump unraveling expects a Fock-diagonal effective Hamiltonian");
  const Eigen::VectorXd energy = h.diagonal();
  const Eigen::VectorXd decay = loss.diagonal();
  const double quantum_gap = model.spec.coarse_frequency() - model.spec.fine_frequency();

  std::vector<EvolutionSample> out(options.n_times);
  for (int g = 0; g < options.n_times; ++g) out[g].t = grid_time(options, g);

  for (int traj = 0; traj < options.trajectories; ++traj) {
    Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(traj));
    Eigen::VectorXcd psi = initial;
    double t_last = 0.0;
    double emitted = 0.0;
    int g = 0;
    while (g < options.n_times) {
      const double target = std::max(rng.uniform(), 1e-300);
      const double t_jump = t_last + waiting_time(psi, decay, target);
      for (; g < options.n_times && out[g].t < t_jump; ++g) {
        // Moments are divided by the norm rather than normalizing the state
        // first, so a Fock state contributes its occupations exactly.
        const Eigen::VectorXcd state = drift(psi, energy, decay, out[g].t - t_last);
        const Moments m = moments(basis, state);
        check_headroom(basis, m, options.top_level_limit, out[g].t);
        out[g].occ_a += m.occ[0] / m.norm2;
        out[g].occ_0 += m.occ[1] / m.norm2;
        out[g].occ_1 += m.occ[2] / m.norm2;
        out[g].norm += 1.0;  // each trajectory carries unit weight in the ensemble
        out[g].energy += expectation(h, state) / m.norm2;
        out[g].emitted += emitted;
      }
      if (g >= options.n_times) break;

      Eigen::VectorXcd before = drift(psi, energy, decay, t_jump - t_last);
      std::vector<Eigen::VectorXcd> branches;
      double total = 0.0;
      for (const auto& jump : model.jumps) {
        branches.push_back(jump.matrix.cast<std::complex<double>>() * before);
        total += branches.back().squaredNorm();
      }
      double u = rng.uniform() * total;
      std::size_t pick = 0;
      while (pick + 1 < branches.size() && u >= branches[pick].squaredNorm())
        u -= branches[pick++].squaredNorm();
      psi = branches[pick].normalized();
      t_last = t_jump;
      emitted += quantum_gap;
    }
  }
  const double inv = 1.0 / options.trajectories;
  for (auto& s : out) {
    s.occ_a *= inv;
    s.occ_0 *= inv;
    s.occ_1 *= inv;
    s.norm *= inv;
    s.energy *= inv;
    s.emitted *= inv;
  }
  return out;
}

}  // namespace

std::vector<EvolutionSample> evolve(const QuantumModel& model, const Eigen::VectorXcd& initial,
                                    const EvolutionOptions& options) {
  if (options.n_times < 1) throw std::domain_error("n_times must be at least 1");
  if (!(options.t_end >= 0.0)) throw std::domain_error("t_end must be non-negative");
  if (initial.size() != model.hamiltonian.basis.dim())
    throw std::domain_error("initial state does not match the Fock basis");
  if (std::abs(initial.norm() - 1.0) > 1e-12)
    throw std::domain_error("initial state must be normalized");
  if (model.mode == QuantumMode::scale_ordered) {
    if (options.trajectories < 1) throw std::domain_error("trajectories must be at least 1");
    return evolve_jumps(model, initial, options);
  }
  return evolve_unitary(model, initial, options);
}

}  // namespace qkin::hierosc
