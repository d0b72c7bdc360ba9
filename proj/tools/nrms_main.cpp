// Command-line front end. Five subcommands cover the toolkit: `speed` and
// `profile` for the sharp-interface wave train, `stability` and `threshold`
// for the argument-principle spectra, `simulate` for the direct solver.
// Every invocation writes a run manifest next to its outputs.
//
// Exit codes: 0 success, 1 numerical failure, 2 bad usage.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nrms/io.hpp"
#include "nrms/pde.hpp"
#include "nrms/stability.hpp"
#include "nrms/wavetrain.hpp"

namespace {

using namespace nrms;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

// "a,b,c" or "lo:hi:step" (inclusive of hi up to rounding).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::istringstream is(text);
      std::string part;
      double abc[3];
      for (double& x : abc) {
        if (!std::getline(is, part, ':')) throw std::invalid_argument(part);
        x = std::stod(part);
      }
      if (std::getline(is, part, ':')) throw std::invalid_argument(part);
      const double lo = abc[0], hi = abc[1], st = abc[2];
      if (!(st > 0.0)) throw std::invalid_argument("step");
      const long n = std::lround(std::floor((hi - lo) / st + 1e-9));
      for (long i = 0; i <= n; ++i) out.push_back(lo + i * st);
    } else {
      std::istringstream is(text);
      std::string part;
      while (std::getline(is, part, ',')) out.push_back(std::stod(part));
    }
  } catch (const std::exception&) {
    throw UsageError("cannot parse grid '" + text +
                     "' (want 'a,b,c' or 'lo:hi:step')");
  }
  if (out.empty()) throw UsageError("empty grid '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string part;
  try {
    while (std::getline(is, part, ',')) out.push_back(std::stoi(part));
  } catch (const std::exception&) {
    throw UsageError("cannot parse integer list '" + text + "'");
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

std::string init_name(SimConfig::Init m) {
  switch (m) {
    case SimConfig::Init::Traveling: return "traveling";
    case SimConfig::Init::Stationary: return "stationary";
    case SimConfig::Init::Random: return "random";
  }
  return "?";
}

std::map<std::string, std::string> config_to_map(const SimConfig& c) {
  std::map<std::string, std::string> m;
  m["epsilon"] = format_g17(c.params.epsilon);
  m["tau"] = format_g17(c.params.tau);
  m["theta"] = format_g17(c.params.theta);
  m["rho"] = format_g17(c.params.rho);
  m["nx"] = std::to_string(c.nx);
  m["ny"] = std::to_string(c.ny);
  m["dt"] = format_g17(c.dt);
  m["t_end"] = format_g17(c.t_end);
  m["stabilization"] = format_g17(c.stabilization);
  m["dealias"] = c.dealias ? "true" : "false";
  m["n_pairs"] = std::to_string(c.n_pairs);
  m["init"] = init_name(c.init);
  m["perturb_q"] = std::to_string(c.perturb_q);
  m["perturb_k"] = std::to_string(c.perturb_k);
  m["perturb_amplitude"] = format_g17(c.perturb_amplitude);
  m["seed_noise"] = format_g17(c.seed_noise);
  m["seed"] = std::to_string(c.seed);
  m["u_mean"] = format_g17(c.u_mean);
  m["v_mean"] = format_g17(c.v_mean);
  m["random_amp"] = format_g17(c.random_amp);
  m["random_modes"] = std::to_string(c.random_modes);
  m["output_every"] = std::to_string(c.output_every);
  m["snapshot_every"] = std::to_string(c.snapshot_every);
  m["outdir"] = c.outdir;
  m["tag"] = c.tag;
  return m;
}

// ---------------------------------------------------------------- speed

struct SpeedArgs {
  double theta = kUnset;
  double tau = 1.0;
  int n_fronts = 1;
  double kappa = kUnset, beta = kUnset, L = kUnset, H = kUnset;
  double D12 = kUnset, D21 = kUnset, D22 = kUnset;
  std::string out, outdir;
};

void cmd_speed(const SpeedArgs& a) {
  Timer timer;
  const bool dims[] = {std::isfinite(a.kappa), std::isfinite(a.beta),
                       std::isfinite(a.L),     std::isfinite(a.H),
                       std::isfinite(a.D12),   std::isfinite(a.D21),
                       std::isfinite(a.D22)};
  int ndim = 0;
  for (bool b : dims) ndim += b;
  const bool have_dim = ndim == 7;
  if (ndim > 0 && !have_dim)
    throw UsageError(
        "dimensional speeds need all of --kappa --beta --L --H --D12 --D21 "
        "--D22");

  double theta = a.theta, tau = a.tau;
  DimensionalParams dp;
  if (have_dim) {
    dp = {a.kappa, a.beta, a.L, a.H, a.D12, a.D21, a.D22};
    theta = dp.theta();
    tau = dp.tau();
  } else if (!std::isfinite(theta)) {
    throw UsageError("--theta is required unless dimensional parameters are given");
  }
  if (a.n_fronts < 1) throw UsageError("--n-fronts must be at least 1");

  const double xi = solve_xi(theta);
  const double c0 = wave_speed(theta, tau, a.n_fronts);

  std::vector<std::pair<std::string, double>> rows = {
      {"theta", theta}, {"tau", tau}, {"n_fronts", double(a.n_fronts)},
      {"xi", xi},       {"c0", c0}};
  if (have_dim) {
    const DimensionalSpeeds ds = dimensional_speeds(dp);
    rows.push_back({"epsilon", dp.epsilon()});
    rows.push_back({"rho", dp.rho()});
    rows.push_back({"c_sharp", ds.c_sharp});
    rows.push_back({"c_bm", ds.c_bm});
    rows.push_back({"c_bm_valid", ds.c_bm_valid ? 1.0 : 0.0});
  }
  for (const auto& [k, v] : rows) std::cout << k << " = " << format_g17(v) << "\n";

  const std::string dir = resolve_outdir(a.outdir);
  ensure_dir(dir);
  RunManifest man;
  man.subcommand = "speed";
  for (const auto& [k, v] : rows) man.parameters[k] = format_g17(v);
  if (!a.out.empty()) {
    const std::string path = dir + "/" + a.out;
    auto os = open_out(path);
    os << "name,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << format_g17(v) << '\n';
    man.outputs.push_back(path);
  }
  man.wall_time_s = timer.seconds();
  man.write(dir, "speed_manifest.json");
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
  double theta = kUnset;
  double tau = 1.0;
  double epsilon = 0.01;
  int n_fronts = 1;
  int samples = 2048;
  std::string out = "profile.csv";
  std::string outdir;
};

void cmd_profile(const ProfileArgs& a) {
  Timer timer;
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  ModelParams p;
  p.epsilon = a.epsilon;
  p.tau = a.tau;
  p.theta = a.theta;
  WaveTrainProfile prof(a.theta, a.tau, a.n_fronts);
  CompositeFields fields = composite_fields(prof, p);
  if (fields.overlap_warning())
    std::cerr << "warning: interface width is large for this front spacing; "
                 "plateau tails overlap\n";

  const std::string dir = resolve_outdir(a.outdir);
  ensure_dir(dir);
  const std::string path = dir + "/" + a.out;
  {
    auto os = open_out(path);
    write_profile_csv(os, fields, a.samples);
  }
  std::cout << "wrote " << path << "  (xi = " << format_g17(prof.xi())
            << ", c0 = " << format_g17(prof.c0()) << ")\n";

  RunManifest man;
  man.subcommand = "profile";
  man.parameters = {{"theta", format_g17(a.theta)},
                    {"tau", format_g17(a.tau)},
                    {"epsilon", format_g17(a.epsilon)},
                    {"n_fronts", std::to_string(a.n_fronts)},
                    {"samples", std::to_string(a.samples)}};
  man.outputs.push_back(path);
  man.wall_time_s = timer.seconds();
  man.write(dir, "profile_manifest.json");
}

// ---------------------------------------------------------------- stability

struct StabilityArgs {
  double theta = kUnset;
  double tau = 1.0;
  int n_fronts = 1;
  int q = 0;
  int k = 0;
  double rho = 1.0;
  bool traveling = false;
  double lambda_max = 1e3;
  std::string out = "trace.csv";
  std::string outdir;
};

void cmd_stability(const StabilityArgs& a) {
  Timer timer;
  if (a.q < 0) throw UsageError("--q must be nonnegative");
  if (a.k < 0 || a.k >= 2 * a.n_fronts)
    throw UsageError("--k must lie in [0, 2N-1]");
  if (!(a.rho > 0.0)) throw UsageError("--rho must be positive");
  const double omega = 2.0 * M_PI * a.q / a.rho;
  if (omega == 0.0 && !mode_conserves_volume(a.k, a.n_fronts))
    throw UsageError(
        "the (q = 0, k = N) class violates volume conservation and has no "
        "spectrum to count");

  const Dispersion disp =
      a.traveling
          ? make_traveling_dispersion(omega, a.k, a.theta, a.tau, a.n_fronts)
          : make_stationary_dispersion(omega, a.k, a.theta, a.tau, a.n_fronts);
  WindingOptions wopt;
  wopt.lambda_max = a.lambda_max;
  const DispersionTrace trace = count_unstable(disp, wopt);
  if (!trace.converged) throw std::runtime_error(trace.message);

  const std::string dir = resolve_outdir(a.outdir);
  ensure_dir(dir);
  const std::string path = dir + "/" + a.out;
  {
    auto os = open_out(path);
    write_trace_csv(os, trace);
  }
  std::cout << "Z = " << trace.z << "\n"
            << "z_raw = " << format_g17(trace.z_raw) << "\n"
            << "lambda_cut = " << format_g17(trace.tail_cut) << "\n"
            << "samples = " << trace.samples.size() << "\n";

  RunManifest man;
  man.subcommand = "stability";
  man.parameters = {{"theta", format_g17(a.theta)},
                    {"tau", format_g17(a.tau)},
                    {"n_fronts", std::to_string(a.n_fronts)},
                    {"q", std::to_string(a.q)},
                    {"k", std::to_string(a.k)},
                    {"rho", format_g17(a.rho)},
                    {"traveling", a.traveling ? "true" : "false"},
                    {"lambda_max", format_g17(a.lambda_max)},
                    {"Z", std::to_string(trace.z)}};
  man.outputs.push_back(path);
  man.wall_time_s = timer.seconds();
  man.write(dir, "stability_manifest.json");
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
  std::string tau_grid = "1";
  std::string q_grid;
  std::string omega_grid;
  std::string k_set = "0";
  double rho = 1.0;
  int n_fronts = 1;
  bool traveling = false;
  int jobs = 1;
  double theta_start = -1.05;
  double theta_min = -60.0;
  std::string out = "thresholds.csv";
  std::string outdir;
};

void cmd_threshold(const ThresholdArgs& a) {
  Timer timer;
  if (a.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (a.q_grid.empty() == a.omega_grid.empty())
    throw UsageError("give exactly one of --q-grid or --omega-grid");
  const std::vector<double> taus = parse_grid(a.tau_grid);
  std::vector<double> omegas;
  if (!a.omega_grid.empty()) {
    omegas = parse_grid(a.omega_grid);
  } else {
    if (!(a.rho > 0.0)) throw UsageError("--rho must be positive");
    for (double q : parse_grid(a.q_grid))
      omegas.push_back(2.0 * M_PI * q / a.rho);
  }
  const std::vector<int> ks = parse_int_list(a.k_set);
  for (int k : ks) {
    if (k < 0 || k >= 2 * a.n_fronts)
      throw UsageError("--k-set entries must lie in [0, 2N-1]");
    if (k == a.n_fronts)
      for (double w : omegas)
        if (w == 0.0)
          throw UsageError(
              "k = N with omega = 0 violates volume conservation; drop the "
              "omega = 0 grid point or the k = N class");
  }
  for (double w : omegas)
    if (w < 0.0) throw UsageError("omega grid must be nonnegative");

  ThresholdOptions topt;
  topt.theta_start = a.theta_start;
  topt.theta_min = a.theta_min;
  const ThresholdTable table = threshold_scan(taus, omegas, ks, a.n_fronts,
                                              a.traveling, a.jobs, topt);

  const std::string dir = resolve_outdir(a.outdir);
  ensure_dir(dir);
  const std::string path = dir + "/" + a.out;
  {
    auto os = open_out(path);
    write_threshold_csv(os, table);
  }

  int converged = 0;
  const ThresholdRow* best = nullptr;
  for (const ThresholdRow& r : table.rows) {
    if (!r.converged) continue;
    ++converged;
    if (!best || r.theta_star > best->theta_star) best = &r;
  }
  std::cout << "rows = " << table.rows.size() << "\n"
            << "converged = " << converged << "\n";
  if (best)
    std::cout << "max theta_star = " << format_g17(best->theta_star)
              << " at omega = " << format_g17(best->omega) << ", k = " << best->k
              << ", tau = " << format_g17(best->tau) << "\n";
  std::cout << "wrote " << path << "\n";

  RunManifest man;
  man.subcommand = "threshold";
  man.parameters = {{"tau_grid", a.tau_grid},
                    {"q_grid", a.q_grid},
                    {"omega_grid", a.omega_grid},
                    {"k_set", a.k_set},
                    {"rho", format_g17(a.rho)},
                    {"n_fronts", std::to_string(a.n_fronts)},
                    {"traveling", a.traveling ? "true" : "false"},
                    {"jobs", std::to_string(a.jobs)},
                    {"theta_start", format_g17(a.theta_start)},
                    {"theta_min", format_g17(a.theta_min)}};
  man.outputs.push_back(path);
  man.wall_time_s = timer.seconds();
  man.write(dir, "threshold_manifest.json");
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::string outdir;
  int jobs = 1;
};

void simulate_one(const SimConfig& cfg, const std::string& config_path,
                  std::mutex& io_mutex) {
  Timer timer;
  for (const std::string& w : cfg.soft_warnings()) {
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "warning: " << config_path << ": " << w << "\n";
  }

  RunResult res = run(cfg);

  const std::string prefix = cfg.tag.empty() ? "" : cfg.tag + "_";
  const std::string diag_path = cfg.outdir + "/" + prefix + "diagnostics.csv";
  {
    auto os = open_out(diag_path);
    write_diagnostics_csv(os, res.diag, cfg.n_pairs);
  }

  const double cut = 0.5 * cfg.t_end;
  const SpeedMeasurement sm = measure_speed(res.diag, cut);
  const double xi_asym = solve_xi(cfg.params.theta);
  const double xi_num =
      sm.c_wpeak * cfg.params.tau / (4.0 * cfg.n_pairs);

  {
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cout << "run " << (cfg.tag.empty() ? config_path : cfg.tag) << ":\n"
              << "  t_end = " << format_g17(res.final_state.t) << "\n"
              << "  c_wpeak = " << format_g17(sm.c_wpeak) << "\n"
              << "  c_zero_crossing = " << format_g17(sm.c_zero_crossing)
              << "\n"
              << "  xi_measured = " << format_g17(xi_num) << "\n"
              << "  xi_selected = " << format_g17(xi_asym) << "\n";
    if (!sm.ok)
      std::cout << "  speed fit: " << sm.message << " (transient cut "
                << format_g17(cut) << ")\n";
    std::cout << "  wrote " << diag_path << "\n";
  }

  RunManifest man;
  man.subcommand = "simulate";
  man.parameters = config_to_map(cfg);
  man.inputs.push_back(config_path);
  man.outputs.push_back(diag_path);
  for (const std::string& f : res.outputs) man.outputs.push_back(f);
  man.wall_time_s = timer.seconds();
  man.write(cfg.outdir, prefix + "simulate_manifest.json");
}

void cmd_simulate(const SimulateArgs& a) {
  if (a.jobs < 1) throw UsageError("--jobs must be at least 1");

  std::vector<SimConfig> cfgs;
  for (const std::string& path : a.configs) {
    SimConfig cfg;
    try {
      cfg = load_config(path);
      for (const std::string& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("override '" + kv + "' is not key=value");
        apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    if (!a.outdir.empty()) cfg.outdir = a.outdir;
    cfg.outdir = resolve_outdir(cfg.outdir);
    ensure_dir(cfg.outdir);
    cfg.validate();
    cfgs.push_back(std::move(cfg));
  }

  std::mutex io_mutex;
  if (a.jobs == 1 || cfgs.size() == 1) {
    for (size_t i = 0; i < cfgs.size(); ++i)
      simulate_one(cfgs[i], a.configs[i], io_mutex);
    return;
  }

  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(cfgs.size());
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        simulate_one(cfgs[i], a.configs[i], io_mutex);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<size_t>(a.jobs, cfgs.size());
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Wave trains of the two-species conserved model: selected speeds, "
      "linear stability counts, instability thresholds, and a pseudo-"
      "spectral direct solver."};
  app.require_subcommand(1);

  SpeedArgs sa;
  CLI::App* speed = app.add_subcommand(
      "speed", "selected train speed from the front-spacing equation");
  speed->add_option("--theta", sa.theta, "coupling coefficient");
  speed->add_option("--tau", sa.tau, "relaxation time scale");
  speed->add_option("--n-fronts", sa.n_fronts, "number of front pairs N");
  speed->add_option("--kappa", sa.kappa, "gradient-energy coefficient");
  speed->add_option("--beta", sa.beta, "well depth scale");
  speed->add_option("--L", sa.L, "pattern wavelength");
  speed->add_option("--H", sa.H, "strip height");
  speed->add_option("--D12", sa.D12, "cross diffusion u <- v");
  speed->add_option("--D21", sa.D21, "cross diffusion v <- u");
  speed->add_option("--D22", sa.D22, "self diffusion of v");
  speed->add_option("--out", sa.out, "also write a name,value CSV");
  speed->add_option("--outdir", sa.outdir, "output directory");
  speed->callback([&sa]() { cmd_speed(sa); });

  ProfileArgs pa;
  CLI::App* profile =
      app.add_subcommand("profile", "sampled wave-train profile CSV");
  profile->add_option("--theta", pa.theta, "coupling coefficient")->required();
  profile->add_option("--tau", pa.tau, "relaxation time scale");
  profile->add_option("--epsilon", pa.epsilon, "interface width");
  profile->add_option("--n-fronts", pa.n_fronts, "number of front pairs N");
  profile->add_option("--samples", pa.samples, "rows in the CSV");
  profile->add_option("--out", pa.out, "output CSV name");
  profile->add_option("--outdir", pa.outdir, "output directory");
  profile->callback([&pa]() { cmd_profile(pa); });

  StabilityArgs ta;
  CLI::App* stab = app.add_subcommand(
      "stability", "count unstable modes of one perturbation class");
  stab->add_option("--theta", ta.theta, "coupling coefficient")->required();
  stab->add_option("--tau", ta.tau, "relaxation time scale");
  stab->add_option("--n-fronts", ta.n_fronts, "number of front pairs N");
  stab->add_option("--q", ta.q, "transverse period count");
  stab->add_option("--k", ta.k, "front-phase index");
  stab->add_option("--rho", ta.rho, "strip height");
  stab->add_flag("--traveling", ta.traveling,
                 "linearize about the traveling train");
  stab->add_option("--lambda-max", ta.lambda_max,
                   "initial contour height (grown automatically)");
  stab->add_option("--out", ta.out, "trace CSV name");
  stab->add_option("--outdir", ta.outdir, "output directory");
  stab->callback([&ta]() { cmd_stability(ta); });

  ThresholdArgs ha;
  CLI::App* thr = app.add_subcommand(
      "threshold", "largest theta at which each class destabilizes");
  thr->add_option("--tau-grid", ha.tau_grid, "tau values, 'a,b,c' or 'lo:hi:step'");
  thr->add_option("--q-grid", ha.q_grid, "transverse period counts");
  thr->add_option("--omega-grid", ha.omega_grid,
                  "transverse wavenumbers (alternative to --q-grid)");
  thr->add_option("--rho", ha.rho, "strip height (with --q-grid)");
  thr->add_option("--k-set", ha.k_set, "front-phase indices, comma list");
  thr->add_option("--n-fronts", ha.n_fronts, "number of front pairs N");
  thr->add_flag("--traveling", ha.traveling,
                "thresholds of the traveling train");
  thr->add_option("--jobs", ha.jobs, "worker threads (default 1)");
  thr->add_option("--theta-start", ha.theta_start, "bracketing start");
  thr->add_option("--theta-min", ha.theta_min, "bracketing floor");
  thr->add_option("--out", ha.out, "table CSV name");
  thr->add_option("--outdir", ha.outdir, "output directory");
  thr->callback([&ha]() { cmd_threshold(ha); });

  SimulateArgs ma;
  CLI::App* sim = app.add_subcommand("simulate", "run the direct solver");
  sim->add_option("--config", ma.configs, "key=value config file (repeatable)")
      ->required();
  sim->add_option("--set", ma.overrides,
                  "override a config key, e.g. --set theta=-2 (repeatable)");
  sim->add_option("--outdir", ma.outdir, "output directory (overrides config)");
  sim->add_option("--jobs", ma.jobs, "worker threads for batch runs");
  sim->callback([&ma]() { cmd_simulate(ma); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
