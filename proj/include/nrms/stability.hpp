#ifndef NRMS_STABILITY_HPP
#define NRMS_STABILITY_HPP

// Linear stability of stationary and traveling wave-trains against
// transverse perturbations. Each admissible perturbation symmetry class is
// labeled by a transverse wavenumber omega = 2 pi q / rho and a front-phase
// index k (the circulant eigenvector g_k); its point spectrum consists of
// the roots of a scalar holomorphic dispersion function F(lambda).
//
// Unstable roots are counted with the argument principle on the boundary of
// a large right half-disc: F carries a linear-in-lambda asymptote, so the
// count reduces to Z = 1/2 + Delta_arg/(2 pi) where Delta_arg is the total
// argument change of F down the imaginary axis. Neutral translation roots at
// lambda = 0 (flat stationary trains are equilibria for any front spacing,
// so every omega = 0 repositioning mode is neutral) are excluded by a small
// semicircular indentation into the right half-plane, making Z a count of
// strictly unstable modes.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace nrms {

using cdouble = std::complex<double>;

// Perturbation symmetry class. q counts transverse periods on the strip of
// height rho; k = 0 is the in-phase front mode, 0 < k < 2N are the phase-
// shifted classes. k = N at omega = 0 violates the conserved-volume
// constraint and is rejected wherever it would be used.
struct Mode {
  int q = 0;
  int k = 0;
  double rho = 1.0;
  double omega() const { return 2.0 * M_PI * q / rho; }
};

// Whether sum_n (-1)^n (g_k)_n vanishes, i.e. whether the omega = 0 limit of
// the class conserves phase volume. True exactly when k != N (mod 2N).
bool mode_conserves_volume(int k, int n_pairs);

// Principal square root sqrt(omega^2 + tau*lambda); the branch keeps
// |arg mu| <= pi/4 everywhere on the closed right half lambda-plane.
cdouble mu_lambda(cdouble lambda, double omega, double tau);

// Dispersion functions. All are holomorphic on the closed right half-plane
// and real on the real axis; omega > 0 is required here (omega = 0 classes
// go through the dedicated paths below).
cdouble f_stationary(cdouble lambda, double omega, int k, double theta,
                     double tau, int n_pairs);
cdouble f_traveling(cdouble lambda, double omega, int k, double theta,
                    double tau, int n_pairs, double c0);

// omega = 0, k = 0 stationary class in the form
// (lambda/4N) (1 + theta tanh(z)/z), z = sqrt(tau lambda)/4N; the in-phase
// drift mode whose positive root appears exactly when theta < -1.
cdouble zero_mode_stationary(cdouble lambda, double theta, double tau,
                             int n_pairs);

// A dispersion function packaged with the data the winding counter needs.
struct Dispersion {
  std::function<cdouble(cdouble)> f;
  cdouble tail_coefficient;  // F ~ tail_coefficient * lambda
  bool indent_origin = false; // lambda = 0 is a known neutral root
};

// Builders select the right formula variant (general / zero-mode / omega->0
// limit) for the class. Traveling builders resolve c0 from theta.
Dispersion make_stationary_dispersion(double omega, int k, double theta,
                                      double tau, int n_pairs);
Dispersion make_traveling_dispersion(double omega, int k, double theta,
                                     double tau, int n_pairs);

struct TraceSample {
  double lambda_im = 0.0;
  cdouble value;
  double arg_unwrapped = 0.0; // accumulated phase change, 0 at +i Lambda
};

struct DispersionTrace {
  std::vector<TraceSample> samples; // ordered +Lambda -> -Lambda
  double unwrapped_phase = 0.0;     // total Delta_arg incl. tails/indentation
  double z_raw = 0.0;               // 1/2 + unwrapped_phase/(2 pi)
  int z = 0;                        // rounded count of unstable roots
  double tail_cut = 0.0;            // Lambda actually used
  bool converged = false;           // z_raw within 1e-3 of an integer
  std::string message;
};

struct WindingOptions {
  double lambda_max = 1e3;     // starting Lambda; grown until the tail locks
  double asymptote_tol = 1e-4; // relative deviation from the linear tail
  double phase_cap = M_PI / 2; // max accepted phase step
  double min_step = 1e-12;     // refinement floor: closer means a root sits
                               // (numerically) on the contour
  double indent_radius = 1e-6;
};

// Argument-principle count of roots with Re lambda > 0. Throws
// std::runtime_error if the refinement floor is hit (near-marginal mode) or
// the asymptote never locks.
DispersionTrace count_unstable(const Dispersion& disp,
                               const WindingOptions& opts = {});

void write_trace_csv(std::ostream& os, const DispersionTrace& trace);

// Independent root-counting oracle: damped complex Newton started from a
// uniform grid of seeds over (0, re_max] x [-im_max, im_max], deduplicated;
// returns the number of distinct converged roots with Re lambda > 0.
int newton_grid_root_count(const std::function<cdouble(cdouble)>& f,
                           double re_max = 50.0, double im_max = 50.0,
                           int grid = 30, double dedupe = 1e-6);

struct ThresholdResult {
  double theta_star = 0.0;
  double lambda_star = 0.0; // Hopf pair at +/- i lambda_star, lambda_star > 0
  double residual = 0.0;    // |F(i lambda_star)| at the solution
  double omega = 0.0;
  int k = 0;
  bool traveling = false;
  bool converged = false;
  std::string message;
};

struct ThresholdOptions {
  double theta_start = -1.05;
  double theta_min = -60.0;
  double theta_step = 0.5;    // coarse bracketing step for the cold start
  double residual_tol = 1e-12;
  int max_newton = 80;
};

// Largest theta < -1 at which the class (omega, k) loses stability, found by
// bracketing the jump of the winding count and polishing with a damped
// two-variable Newton on Re F(i lambda) = Im F(i lambda) = 0. Warm seeds
// (from a neighboring omega) skip the bracketing stage.
ThresholdResult find_threshold(double omega, int k, double tau, int n_pairs,
                               bool traveling,
                               const ThresholdOptions& opts = {},
                               const double* seed_theta = nullptr,
                               const double* seed_lambda = nullptr);

struct ThresholdRow {
  double tau = 0.0;
  double omega = 0.0;
  int k = 0;
  int n_pairs = 1;
  double theta_star = 0.0;
  double lambda_star = 0.0;
  double residual = 0.0;
  bool converged = false;
};

struct ThresholdTable {
  std::vector<ThresholdRow> rows; // sorted by (tau, omega, k)
  double wall_time_s = 0.0;
};

// Sweeps the grid with continuation in omega inside each (tau, k) cell.
// jobs > 1 distributes (tau, k) cells over a worker pool; the row order of
// the result does not depend on jobs.
ThresholdTable threshold_scan(const std::vector<double>& tau_grid,
                              const std::vector<double>& omega_grid,
                              const std::vector<int>& k_set, int n_pairs,
                              bool traveling, int jobs = 1,
                              const ThresholdOptions& opts = {});

void write_threshold_csv(std::ostream& os, const ThresholdTable& table);

} // namespace nrms

#endif
