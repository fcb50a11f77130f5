#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkin/causal.hpp"
#include "qkin/engine.hpp"
#include "qkin/errors.hpp"
#include "qkin/format.hpp"
#include "qkin/hierosc.hpp"
#include "qkin/site_json.hpp"
#include "qkin/spectro.hpp"

namespace qkin::cli {

namespace {

constexpr double kNormTolerance = 1e-9;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Flat `key = value` file. Keys name the subcommand's long flags (dashes or
// underscores); values fill options the command line left unset.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError(where + "unknown key '" + key + "'");
    if (opt->count() > 0) continue;  // the flag wins
    std::istringstream tokens(value);
    std::string token;
    int n = 0;
    while (tokens >> token) {
      opt->add_result(token);
      ++n;
    }
    if (n == 0) throw ConfigError(where + "empty value for '" + key + "'");
    try {
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

// "-" is standard output.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const std::string& path, const nlohmann::json& doc) {
  Output out(path);
  out.stream() << doc.dump(2) << '\n';
}

// ---- rates ----

struct RatesArgs {
  std::string config;
  double omega = 1e14;
  double dipole = 1e-18;
  double temperature = 300.0;
  int n_levels = 3;
  std::string mode = "full";
  std::uint64_t seed = 1;  // accepted for uniformity; the computation is deterministic
  std::string out = "-";
};

void add_rates(CLI::App& app, RatesArgs& a) {
  auto* sub = app.add_subcommand("rates", "Einstein rates and relaxation generator (CGS, kelvin)");
  sub->add_option("--config", a.config, "key = value file");
  sub->add_option("--omega", a.omega, "angular frequency, rad/s")->capture_default_str();
  sub->add_option("--dipole", a.dipole, "1->0 transition dipole, esu cm")->capture_default_str();
  sub->add_option("--temperature", a.temperature, "bath temperature, K")->capture_default_str();
  sub->add_option("--n-levels", a.n_levels, "levels in the generator")->capture_default_str();
  sub->add_option("--mode", a.mode, "off | spontaneous | full")->capture_default_str();
  sub->add_option("--seed", a.seed, "unused, the output is deterministic");
  sub->add_option("--out", a.out, "JSON output path, - for stdout")->capture_default_str();
}

int cmd_rates(const RatesArgs& a) {
  const spectro::OscillatorSpec spec{a.omega, a.dipole, a.n_levels};
  const auto mode = spectro::parse_radiation_mode(a.mode);
  spec.validate();
  if (!(a.temperature > 0.0)) throw ConfigError("temperature must be positive");
  const auto rates = spectro::compute_rates(spec, a.temperature, mode);
  nlohmann::json kappa = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rates.kappa.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < rates.kappa.cols(); ++j) row.push_back(round12(rates.kappa(i, j)));
    kappa.push_back(row);
  }
  nlohmann::json doc;
  doc["boltzmann"] = round12(rates.boltzmann);
  doc["k_eq"] = round12(rates.k_eq);
  doc["a_spont"] = round12(rates.a_spont);
  doc["kappa"] = kappa;
  write_json(a.out, doc);
  return kExitOk;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config;
  engine::GasConfig gas;
  std::vector<double> force{0.0, 0.0, 0.0};
  std::string radiation_mode = "off";
  std::string out = "-";
  std::string histogram_out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* sub = app.add_subcommand("simulate", "Stochastic particle run of the semi-quantum gas");
  auto& g = a.gas;
  sub->add_option("--config", a.config, "key = value file");
  sub->add_option("--seed", g.seed)->capture_default_str();
  sub->add_option("--steps", g.steps)->capture_default_str();
  sub->add_option("--out", a.out, "CSV output path, - for stdout")->capture_default_str();
  sub->add_option("--sample-stride", g.sample_stride, "steps between CSV rows")->capture_default_str();
  sub->add_option("--histogram-out", a.histogram_out, "JSON-lines level histograms");
  sub->add_option("--n-particles", g.n_particles)->capture_default_str();
  sub->add_option("--box-length", g.box_length)->capture_default_str();
  sub->add_option("--r0", g.r0, "collision radius")->capture_default_str();
  sub->add_option("--mass", g.mass)->capture_default_str();
  sub->add_option("--omega", g.omega, "oscillator quantum")->capture_default_str();
  sub->add_option("--n-max", g.n_max, "largest quantum transfer per collision")->capture_default_str();
  sub->add_option("--force", a.force, "external force, three components")->expected(3);
  sub->add_option("--dt", g.dt)->capture_default_str();
  sub->add_option("--ordering-rule", g.ordering_rule, "true | false")->capture_default_str();
  sub->add_option("--collisions", g.collisions, "true | false")->capture_default_str();
  sub->add_option("--mode,--radiation-mode", a.radiation_mode, "off | spontaneous | full")
      ->capture_default_str();
  sub->add_option("--spont-rate", g.spont_rate, "A of the 1 -> 0 transition")->capture_default_str();
  sub->add_option("--bath-temperature", g.bath_temperature)->capture_default_str();
  sub->add_option("--n-levels", g.n_levels, "levels in the radiative generator")->capture_default_str();
  sub->add_option("--initial-temperature", g.initial_temperature)->capture_default_str();
  sub->add_option("--entropy-bins", g.entropy_bins)->capture_default_str();
}

int cmd_simulate(SimulateArgs& a) {
  auto config = a.gas;
  config.force = engine::Vec3(a.force[0], a.force[1], a.force[2]);
  config.radiation_mode = spectro::parse_radiation_mode(a.radiation_mode);
  config.validate();
  engine::Engine engine(config);
  Output csv(a.out);
  std::unique_ptr<Output> histogram;
  if (!a.histogram_out.empty()) histogram = std::make_unique<Output>(a.histogram_out);
  const auto summary = engine::run(engine, csv.stream(), histogram ? &histogram->stream() : nullptr);

  std::ostream& log = a.out == "-" ? std::cerr : std::cout;
  const auto print = [&](const char* label, const engine::EnergyLedger& l) {
    log << label << " e_kin=" << fmt12(l.e_kin) << " e_int=" << fmt12(l.e_int)
        << " e_rad=" << fmt12(l.e_rad) << " e_pump=" << fmt12(l.e_pump)
        << " e_work=" << fmt12(l.e_work) << " invariant=" << fmt12(l.invariant()) << '\n';
  };
  print("initial", summary.initial);
  print("final  ", summary.final);
  log << "collisions=" << summary.collisions
      << " max_momentum_error=" << fmt12(summary.max_momentum_error)
      << " max_ledger_drift=" << fmt12(summary.max_ledger_drift) << '\n';
  if (!summary.ledger_ok) {
    std::cerr << "ledger violated: relative drift " << fmt12(summary.max_ledger_drift)
              << " exceeds " << fmt12(engine::kLedgerTolerance) << '\n';
    return kExitCheckFailed;
  }
  log << "ledger ok\n";
  return kExitOk;
}

// ---- hier-osc ----

struct HierArgs {
  std::string config;
  hierosc::ChainSpec spec;
  hierosc::EvolutionOptions options;
  std::vector<int> initial{1, 0, 0};
  std::string mode = "hermitian";
  std::string out = "-";
};

void add_hierosc(CLI::App& app, HierArgs& a) {
  auto* sub = app.add_subcommand("hier-osc", "Truncated Fock-space evolution of the hierarchic chain");
  auto& s = a.spec;
  auto& o = a.options;
  sub->add_option("--config", a.config, "key = value file");
  sub->add_option("--mode", a.mode, "free | hermitian | hermitian_full | scale_ordered")
      ->capture_default_str();
  sub->add_option("--seed", o.seed)->capture_default_str();
  sub->add_option("--out", a.out, "CSV output path, - for stdout")->capture_default_str();
  sub->add_option("--m0", s.m0)->capture_default_str();
  sub->add_option("--k0", s.k0)->capture_default_str();
  sub->add_option("--k1", s.k1)->capture_default_str();
  sub->add_option("--tilde-k0", s.tilde_k0, "inter-block rigidity")->capture_default_str();
  sub->add_option("--n-cut", s.n_cut, "Fock levels per mode")->capture_default_str();
  sub->add_option("--t-end", o.t_end)->capture_default_str();
  sub->add_option("--n-times", o.n_times, "output rows")->capture_default_str();
  sub->add_option("--trajectories", o.trajectories, "scale_ordered ensemble size")
      ->capture_default_str();
  sub->add_option("--initial", a.initial, "initial occupations n_A n_0 n_1")->expected(3);
}

int cmd_hierosc(const HierArgs& a) {
  const auto mode = hierosc::parse_quantum_mode(a.mode);
  a.spec.validate();
  if (!(a.options.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (a.options.n_times < 1) throw ConfigError("n_times must be at least 1");
  if (a.options.trajectories < 1) throw ConfigError("trajectories must be at least 1");
  const auto model = hierosc::build_quantum_hamiltonian(a.spec, mode);
  const auto psi0 =
      hierosc::fock_state(model.hamiltonian.basis, a.initial[0], a.initial[1], a.initial[2]);
  const auto samples = hierosc::evolve(model, psi0, a.options);

  Output out(a.out);
  auto& csv = out.stream();
  csv << "t,occ_A,occ_0,occ_1,norm,energy\n";
  double drift = 0.0;
  for (const auto& s : samples) {
    csv << fmt12(s.t) << ',' << fmt12(s.occ_a) << ',' << fmt12(s.occ_0) << ',' << fmt12(s.occ_1)
        << ',' << fmt12(s.norm) << ',' << fmt12(s.energy) << '\n';
    drift = std::max(drift, std::abs(s.norm - 1.0));
  }
  std::ostream& log = a.out == "-" ? std::cerr : std::cout;
  log << "mode=" << hierosc::to_string(mode) << " n_cut=" << a.spec.n_cut
      << " norm_drift=" << fmt12(drift) << '\n';
  if (drift > kNormTolerance) {
    std::cerr << "norm drift " << fmt12(drift) << " exceeds " << fmt12(kNormTolerance) << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---- causal ----

struct CausalArgs {
  std::string in;
  std::string out = "-";
  int p = 2;
  int depth = 2;
  bool tree_only = false;
};

void add_causal(CLI::App& app, CausalArgs& check, CausalArgs& gen) {
  auto* sub = app.add_subcommand("causal", "Finite causal sites");
  sub->require_subcommand(1);
  auto* c = sub->add_subcommand("check", "Check a site file against the axioms");
  c->add_option("--in", check.in, "site JSON")->required();
  c->add_option("--out", check.out, "report JSON path, - for stdout")->capture_default_str();
  auto* g = sub->add_subcommand("gen", "Generate a p-adic cascade site");
  g->add_option("--p", gen.p, "branching factor")->capture_default_str();
  g->add_option("--depth", gen.depth, "tree levels")->capture_default_str();
  g->add_option("--out", gen.out, "site JSON path, - for stdout")->capture_default_str();
  g->add_flag("--tree-only", gen.tree_only, "omit the union closure");
}

int report_exit(const causal::Site& site, const causal::AxiomReport& report) {
  if (report.passed()) return kExitOk;
  for (const auto& v : report.violations) {
    std::cerr << "axiom " << v.axiom << " violated:";
    for (auto r : v.witness) std::cerr << ' ' << site.name(r);
    std::cerr << '\n';
  }
  return kExitCheckFailed;
}

int cmd_causal_check(const CausalArgs& a) {
  std::ifstream in(a.in, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + a.in + "'");
  std::stringstream text;
  text << in.rdbuf();
  causal::Site site = [&] {
    try {
      return causal::parse_site(text.str());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(a.in + ": " + e.what());
    }
  }();
  const auto report = causal::check_axioms(site);
  write_json(a.out, causal::report_to_json(site, report));
  return report_exit(site, report);
}

int cmd_causal_gen(const CausalArgs& a) {
  const auto site = causal::cascade_site(a.p, a.depth, a.tree_only);
  write_json(a.out, causal::site_to_json(site));
  return report_exit(site, causal::check_axioms(site));
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"qkin: semi-quantum kinetics, hierarchic oscillators and causal sites"};
  app.require_subcommand(1);
  RatesArgs rates;
  SimulateArgs simulate;
  HierArgs hier;
  CausalArgs check, gen;
  add_rates(app, rates);
  add_simulate(app, simulate);
  add_hierosc(app, hier);
  add_causal(app, check, gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "rates") {
      if (!rates.config.empty()) apply_config_file(*sub, rates.config);
      return cmd_rates(rates);
    }
    if (name == "simulate") {
      if (!simulate.config.empty()) apply_config_file(*sub, simulate.config);
      return cmd_simulate(simulate);
    }
    if (name == "hier-osc") {
      if (!hier.config.empty()) apply_config_file(*sub, hier.config);
      return cmd_hierosc(hier);
    }
    const std::string leaf = sub->get_subcommands().front()->get_name();
    return leaf == "check" ? cmd_causal_check(check) : cmd_causal_gen(gen);
  } catch (const TruncationOverflow& e) {
    std::cerr << "truncation overflow: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace qkin::cli
