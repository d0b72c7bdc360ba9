#ifndef NRMS_PDE_HPP
#define NRMS_PDE_HPP

// Pseudo-spectral solver for the nondimensional two-species system on the
// periodic box [0,1] x [0,rho]:
//
//   du/dt = Lap(w),  w = -eps Lap(u) + f(u)/eps + theta v,   f(u) = u^3 - u
//   tau dv/dt = Lap(v + u/tau)
//
// Time stepping is first-order IMEX: the fourth-order term and a linear
// stabilization split S*Lap(u) are implicit, everything else explicit; the
// cubic is dealiased with the 2/3 rule. Zero-wavenumber amplitudes pass
// through every update untouched, so both means are conserved to roundoff.

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrms/stability.hpp"
#include "nrms/wavetrain.hpp"

namespace nrms {

struct SimConfig {
  ModelParams params;
  int nx = 256;
  int ny = 1;
  double dt = 1e-5;
  double t_end = 1.0;
  double stabilization = 2.0; // S in the implicit split
  bool dealias = true;
  int n_pairs = 1;

  enum class Init { Traveling, Stationary, Random } init = Init::Traveling;

  // Front displacement seeding: front n shifts in x by
  // amplitude * cos(pi k (n-1)/N) * cos(2 pi q y / rho).
  int perturb_q = 0;
  int perturb_k = 0;
  double perturb_amplitude = 0.0;

  // Deterministic zero-mean white noise added to v at init.
  double seed_noise = 0.0;
  unsigned long long seed = 12345;

  // Random smooth init (Init::Random).
  double u_mean = 0.0;
  double v_mean = 0.0;
  double random_amp = 0.1;
  int random_modes = 8;

  int output_every = 100;   // diagnostics cadence, in steps
  int snapshot_every = 0;   // field snapshot cadence; 0 disables
  std::string outdir;       // snapshots land here when nonempty
  std::string tag;          // filename prefix

  void validate() const;
  std::vector<std::string> soft_warnings() const; // e.g. dx > eps/2
};

struct FieldState {
  int nx = 0;
  int ny = 0;
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

struct SimulationDiverged : std::runtime_error {
  explicit SimulationDiverged(double when)
      : std::runtime_error("simulation diverged (max|u| > 10) at t = " +
                           std::to_string(when)),
        time(when) {}
  double time;
};

struct DiagRecord {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double energy = 0.0;   // NaN unless theta > 0
  double lyapunov = 0.0; // interface-measure proxy
  std::vector<double> fronts; // u zero crossings on the reference row
  double wpeak = 0.0;         // unwrapped w-maximum position
  double zcross = 0.0;        // unwrapped rising u zero crossing
  double front_spread = 0.0;  // max-min front offset across rows (2D)
  double speed_estimate = 0.0; // trailing-window slope of wpeak, NaN early
  bool wpeak_ok = true;
};

struct Diagnostics {
  std::vector<DiagRecord> records;
  bool wpeak_lock_lost = false;
  // tracking state used while recording
  double wpeak_prev = 0.0, wpeak_acc = 0.0;
  double zcross_prev = 0.0, zcross_acc = 0.0;
  bool wpeak_started = false;
  bool zcross_started = false;
};

class Simulator {
public:
  explicit Simulator(const SimConfig& cfg);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void init(); // build initial data per cfg.init
  void set_state(const FieldState& s);
  FieldState state() const;

  void step();
  void advance(long nsteps);

  double time() const;
  long step_count() const;
  const SimConfig& config() const;

  Diagnostics& diagnostics();
  void record_diagnostics();

  // w = -eps Lap u + f(u)/eps + theta v on the full grid.
  std::vector<double> compute_w() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience single-step form; round-trips the state through a Simulator.
FieldState step_once(const FieldState& s, const SimConfig& cfg);

// Composite wave-train initial data (with optional front-displacement
// seeding); amplitude 0 reproduces the unperturbed fields bitwise.
FieldState init_wavetrain(const SimConfig& cfg);

struct RunResult {
  FieldState final_state;
  Diagnostics diag;
  std::vector<std::string> outputs; // snapshot files + index, if any
};

RunResult run(const SimConfig& cfg);

struct SpeedMeasurement {
  double c_wpeak = 0.0;
  double c_zero_crossing = 0.0;
  bool ok = false;
  std::string message;
};

// Least-squares slopes of the unwrapped front tracks over t >= transient_cut
// (at least 10 samples required; fails if the w-peak lock was lost there).
SpeedMeasurement measure_speed(const Diagnostics& diag, double transient_cut);

void write_diagnostics_csv(std::ostream& os, const Diagnostics& diag,
                           int n_pairs);

SimConfig load_config(const std::string& path);
void apply_config_kv(SimConfig& cfg, const std::string& key,
                     const std::string& value);

} // namespace nrms

#endif
