// End-to-end acceptance checks. Each check is numbered, self-contained, and
// prints one [PASS]/[FAIL] line with the measured quantity next to the pinned
// tolerance, so a failure localizes itself. Run with no arguments for the
// whole battery, or pass check numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nrms/kernels.hpp"
#include "nrms/pde.hpp"
#include "nrms/stability.hpp"
#include "nrms/wavetrain.hpp"

using namespace nrms;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Greedy nearest-neighbor multiset distance between two spectra.
double spectrum_mismatch(const std::vector<cdouble>& a,
                         const std::vector<cdouble>& b) {
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const cdouble& z : a) {
    int best = -1;
    double bd = 1e300;
    for (size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(z - b[i]);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return 1e300;
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

FieldState constant_state(int nx, double u, double v) {
  FieldState s;
  s.nx = nx;
  s.ny = 1;
  s.u.assign(nx, u);
  s.v.assign(nx, v);
  return s;
}

double cos_amp(const std::vector<double>& f, int j) {
  const int nx = static_cast<int>(f.size());
  double s = 0.0;
  for (int i = 0; i < nx; ++i) s += f[i] * std::cos(kTwoPi * j * i / nx);
  return 2.0 * s / nx;
}

// ---------------------------------------------------------------- check 1

bool check1() {
  Timer tm;
  bool ok = true;
  std::string why;

  if (solve_xi(-1.0) != 0.0 || solve_xi(-0.25) != 0.0) {
    ok = false;
    why += " no-selection branch not exact;";
  }

  // Independent bisection at theta = -2.25.
  {
    const double theta = -2.25;
    double lo = 1e-12, hi = 60.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((mid + theta * std::tanh(mid)) < 0.0 ? lo : hi) = mid;
    }
    const double xb = 0.5 * (lo + hi);
    if (std::abs(solve_xi(theta) - xb) > 1e-12) {
      ok = false;
      why += " bisection cross-check off;";
    }
  }

  std::mt19937_64 rng(101);
  double max_res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = uniform(rng, -50.0, -1.0);
    const double xi = solve_xi(theta);
    max_res = std::max(max_res, std::abs(xi + theta * std::tanh(xi)));
  }
  if (max_res >= 1e-13) {
    ok = false;
    why += " residual too large;";
  }

  // tanh(xi) rounds to 1 here, so the root may land exactly on |theta|.
  const double ratio = solve_xi(-50.0) / 50.0;
  if (!(ratio > 0.999 && ratio <= 1.0)) {
    ok = false;
    why += " strong-drive asymptote off;";
  }

  std::printf(
      "[%s] C1 speed equation: max residual %.3g (tol 1e-13), xi(-50)/50 = "
      "%.6f, %.2fs%s\n",
      ok ? "PASS" : "FAIL", max_res, ratio, tm.s(), why.c_str());
  return ok;
}

// ---------------------------------------------------------------- check 2

bool check2() {
  Timer tm;
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n_pairs = 1 + trial % 8;
    const int s = 2 * n_pairs;
    const double a = uniform(rng, -8.0, 8.0);
    const cdouble b = std::polar(uniform(rng, 0.1, 12.0),
                                 uniform(rng, -(M_PI / 4 - 0.015),
                                         M_PI / 4 - 0.015));
    const DenseKernelMatrices dense = dense_matrices(a, b, n_pairs);
    Eigen::MatrixXcd m1(s, s), m2(s, s);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        m1(i, j) = dense.at1(i, j);
        m2(i, j) = dense.at2(i, j);
      }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es1(m1, false), es2(m2, false);
    std::vector<cdouble> z1, z2, e1, e2;
    for (int k = 0; k < s; ++k) {
      z1.push_back(zeta1(k, a, b, n_pairs));
      z2.push_back(zeta2(k, a, b, n_pairs));
      e1.push_back(es1.eigenvalues()(k));
      e2.push_back(es2.eigenvalues()(k));
    }
    // Scale by the spectral radius: the dense solver's own error grows
    // with the matrix norm, which is large for small |b|.
    double radius = 0.0;
    for (const cdouble& z : z1) radius = std::max(radius, std::abs(z));
    for (const cdouble& z : z2) radius = std::max(radius, std::abs(z));
    worst = std::max(worst, spectrum_mismatch(z1, e1) / (1.0 + radius));
    worst = std::max(worst, spectrum_mismatch(z2, e2) / (1.0 + radius));
  }
  const bool ok = worst < 1e-10;
  std::printf(
      "[%s] C2 kernel spectra vs dense eigensolver: worst scaled mismatch "
      "%.3g (tol 1e-10) over 100 draws, N up to 8, %.2fs\n",
      ok ? "PASS" : "FAIL", worst, tm.s());
  return ok;
}

// ---------------------------------------------------------------- check 3

bool check3() {
  Timer tm;
  std::mt19937_64 rng(303);
  double worst = 0.0; // residuals scaled to their natural magnitude
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = uniform(rng, -6.0, -1.05);
    const double tau = uniform(rng, 0.2, 3.0);
    const int n_pairs = 1 + static_cast<int>(uniform(rng, 0.0, 2.999));
    const WaveTrainProfile p(theta, tau, n_pairs);
    const int n2 = 2 * n_pairs;
    const double c0 = p.c0();
    const double a = tau * c0;
    const double amp = std::tanh(p.xi()) / tau;
    const double scale = 1.0 + amp + c0 + std::abs(theta) * amp;
    auto rel = [&](double r) { worst = std::max(worst, std::abs(r) / scale); };

    for (int n = 1; n <= n2; ++n) {
      const double pin = (n % 2 == 0 ? 1.0 : -1.0) * (-amp);
      rel(p.v0_right(n) - p.v0_left(n));
      rel(p.v0_left(n) - pin);
      rel(p.w0_left(n) - theta * pin);
      rel(p.w0_right(n) - p.w0_left(n));
      rel(p.w0_left(n) - theta * p.v0_left(n));
      const double sw = (n % 2 == 1) ? 1.0 : -1.0; // rising front slows down
      rel(p.w0_deriv_right(n) - p.w0_deriv_left(n) - 2.0 * sw * c0);
      rel(p.v0_deriv_right(n) - p.v0_deriv_left(n) + 2.0 * sw * c0);
    }

    const double len = 1.0 / n2;
    double int_v = 0.0, int_w = 0.0;
    const double ode_scale = scale * (1.0 + a) * (1.0 + a);
    for (int n = 1; n <= n2; ++n) {
      const double xl = (n - 1) * len;
      for (double f : {0.15, 0.4, 0.62, 0.87}) {
        const double x = xl + f * len;
        worst = std::max(
            worst, std::abs(p.v0_deriv2(x) + a * p.v0_deriv(x)) / ode_scale);
      }
      rel(p.w0_deriv(xl + 0.2 * len) - p.w0_deriv(xl + 0.7 * len));

      // Interior chemical profile is c1 + c2 exp(-a s); recover the two
      // coefficients from two samples, confirm with a third, and use the
      // closed-form integral for the zero-mean condition.
      const double s1 = 0.25 * len, s2 = 0.5 * len, s3 = 0.75 * len;
      const double e1 = std::exp(-a * s1), e2 = std::exp(-a * s2),
                   e3 = std::exp(-a * s3);
      const double v1 = p.v0(xl + s1), v2 = p.v0(xl + s2), v3 = p.v0(xl + s3);
      const double c2c = (v1 - v2) / (e1 - e2);
      const double c1c = v1 - c2c * e1;
      rel(v3 - (c1c + c2c * e3));
      int_v += c1c * len + c2c * (1.0 - std::exp(-a * len)) / a;
      int_w += len * p.w0(xl + s2); // midpoint rule, exact on linear pieces
    }
    rel(int_v);
    rel(int_w);
  }
  const bool ok = worst < 1e-10;
  std::printf(
      "[%s] C3 interface conditions of 50 random trains: worst scaled "
      "residual %.3g (tol 1e-10), %.2fs\n",
      ok ? "PASS" : "FAIL", worst, tm.s());
  return ok;
}

// ---------------------------------------------------------------- check 4

int adaptive_root_count(const Dispersion& d, double scale) {
  const double big = std::max(300.0, 1.5 * scale);
  return std::max(newton_grid_root_count(d.f, 150.0, 150.0, 40),
                  newton_grid_root_count(d.f, big, big, 40));
}

bool check4() {
  Timer tm;
  bool ok = true;
  std::string why;
  int windings = 0;

  for (int n_pairs : {1, 2}) {
    for (double tau : {0.5, 1.0, 2.0}) {
      for (double theta : {-0.9, 0.5}) {
        for (int q = 0; q <= 5; ++q) {
          for (int k = 0; k < 2 * n_pairs; ++k) {
            if (q == 0 && !mode_conserves_volume(k, n_pairs)) continue;
            const DispersionTrace t = count_unstable(make_stationary_dispersion(
                kTwoPi * q, k, theta, tau, n_pairs));
            ++windings;
            if (!t.converged || t.z != 0) {
              ok = false;
              char buf[128];
              std::snprintf(buf, sizeof buf,
                            " nonzero at (N=%d,tau=%g,theta=%g,q=%d,k=%d);",
                            n_pairs, tau, theta, q, k);
              why += buf;
            }
          }
        }
      }
    }
  }

  const DispersionTrace drift =
      count_unstable(make_stationary_dispersion(0.0, 0, -2.0, 1.0, 1));
  if (!drift.converged || drift.z != 1) {
    ok = false;
    why += " drift mode count != 1 at theta=-2;";
  }

  std::mt19937_64 rng(404);
  int mismatches = 0, retries = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = uniform(rng, -3.5, -1.1);
    const double tau = uniform(rng, 0.5, 2.0);
    const int n_pairs = 1 + static_cast<int>(uniform(rng, 0.0, 1.999));
    const int q = static_cast<int>(uniform(rng, 0.0, 3.999));
    int k = static_cast<int>(uniform(rng, 0.0, 2.0 * n_pairs - 1e-9));
    if (q == 0 && !mode_conserves_volume(k, n_pairs)) k = 0;
    const double omega = kTwoPi * q;
    const Dispersion d =
        make_stationary_dispersion(omega, k, theta, tau, n_pairs);
    const DispersionTrace t = count_unstable(d);
    ++windings;
    const double xi = solve_xi(theta);
    const double scale =
        (std::pow(4.0 * n_pairs * (1.0 + xi) + omega, 2.0) + 20.0) / tau;
    int oracle = adaptive_root_count(d, scale);
    if (oracle != t.z) {
      ++retries;
      const double mid = std::max(200.0, scale);
      oracle = std::max(oracle, newton_grid_root_count(d.f, mid, mid, 64));
    }
    if (!t.converged || oracle != t.z) {
      ++mismatches;
      char buf[160];
      std::snprintf(
          buf, sizeof buf,
          " oracle %d vs winding %d at (N=%d,tau=%.3f,theta=%.3f,q=%d,k=%d);",
          oracle, t.z, n_pairs, tau, theta, q, k);
      why += buf;
    }
  }
  if (mismatches > 0) ok = false;

  std::printf(
      "[%s] C4 stationary stability map: %d windings all as expected, "
      "oracle mismatches %d/20 (retries %d), %.2fs%s\n",
      ok ? "PASS" : "FAIL", windings, mismatches, retries, tm.s(),
      why.c_str());
  return ok;
}

// ---------------------------------------------------------------- check 5

bool check5() {
  Timer tm;
  std::vector<double> omegas;
  for (int i = 1; i <= 80; ++i) omegas.push_back(0.5 * i);
  const ThresholdTable table =
      threshold_scan({1.0}, omegas, {0}, 1, /*traveling=*/true, 1);

  int converged = 0;
  double best = -1e300, best_omega = 0.0;
  for (const ThresholdRow& r : table.rows) {
    if (!r.converged) continue;
    ++converged;
    if (r.theta_star > best) {
      best = r.theta_star;
      best_omega = r.omega;
    }
  }
  bool ok = converged >= 30 && std::abs(best - (-5.5)) <= 0.3;
  std::string why;
  if (converged < 30) why += " too few converged thresholds;";

  int quiet = 0, quiet_expected = 0;
  for (double theta : {-1.5, -2.5, -3.5, -4.5}) {
    for (double omega : {1.0, 2.5, M_PI, 5.0, kTwoPi}) {
      ++quiet_expected;
      const DispersionTrace t =
          count_unstable(make_traveling_dispersion(omega, 0, theta, 1.0, 1));
      if (t.converged && t.z == 0) ++quiet;
    }
  }
  if (quiet != quiet_expected) {
    ok = false;
    why += " spurious instability above the threshold;";
  }

  std::printf(
      "[%s] C5 traveling threshold scan: max theta* = %.4f at omega = %.2f "
      "(pin -5.5 +/- 0.3), %d/80 converged, %d/%d quiet spot checks, "
      "%.2fs%s\n",
      ok ? "PASS" : "FAIL", best, best_omega, converged, quiet, quiet_expected,
      tm.s(), why.c_str());
  return ok;
}

// ---------------------------------------------------------------- check 6

struct GainTheory {
  double m11, m12, m21, m22;
};

GainTheory gain_theory(const SimConfig& cfg, double ub, int j) {
  const double K2 = std::pow(kTwoPi * j, 2.0);
  const double eps = cfg.params.epsilon, tau = cfg.params.tau;
  const double fp = 3.0 * ub * ub - 1.0;
  const double du = 1.0 + cfg.dt * (eps * K2 * K2 + cfg.stabilization * K2);
  const double dv = 1.0 + cfg.dt * K2 / tau;
  return {(1.0 - cfg.dt * K2 * (fp / eps - cfg.stabilization)) / du,
          (-cfg.dt * K2 * cfg.params.theta) / du,
          (-cfg.dt * K2 / (tau * tau)) / dv, 1.0 / dv};
}

double gain_measured_error(const SimConfig& cfg, double ub, double vb, int j) {
  const double delta = 1e-5;
  const FieldState base = step_once(constant_state(cfg.nx, ub, vb), cfg);
  const GainTheory g = gain_theory(cfg, ub, j);
  double worst = 0.0;

  FieldState pu = constant_state(cfg.nx, ub, vb);
  for (int i = 0; i < cfg.nx; ++i)
    pu.u[i] += delta * std::cos(kTwoPi * j * i / cfg.nx);
  const FieldState ou = step_once(pu, cfg);
  std::vector<double> du(cfg.nx), dv(cfg.nx);
  for (int i = 0; i < cfg.nx; ++i) du[i] = ou.u[i] - base.u[i];
  for (int i = 0; i < cfg.nx; ++i) dv[i] = ou.v[i] - base.v[i];
  worst = std::max(worst, std::abs(cos_amp(du, j) / delta - g.m11));
  worst = std::max(worst, std::abs(cos_amp(dv, j) / delta - g.m21));

  FieldState pv = constant_state(cfg.nx, ub, vb);
  for (int i = 0; i < cfg.nx; ++i)
    pv.v[i] += delta * std::cos(kTwoPi * j * i / cfg.nx);
  const FieldState ov = step_once(pv, cfg);
  for (int i = 0; i < cfg.nx; ++i) du[i] = ov.u[i] - base.u[i];
  for (int i = 0; i < cfg.nx; ++i) dv[i] = ov.v[i] - base.v[i];
  worst = std::max(worst, std::abs(cos_amp(du, j) / delta - g.m12));
  worst = std::max(worst, std::abs(cos_amp(dv, j) / delta - g.m22));
  return worst;
}

bool check6() {
  Timer tm;
  SimConfig cfg;
  cfg.nx = 32;
  cfg.dt = 1e-5;
  cfg.params.epsilon = 0.1;
  cfg.params.tau = 0.7;
  cfg.params.theta = -2.0;

  double worst = 0.0;
  for (int j : {1, 3, 5}) worst = std::max(worst, gain_measured_error(cfg, 0.2, 0.0, j));
  {
    SimConfig alt = cfg;
    alt.params.theta = 1.0;
    alt.params.tau = 1.5;
    alt.stabilization = 3.0;
    worst = std::max(worst, gain_measured_error(alt, -0.4, 0.1, 2));
  }

  // First-order defect against the exact mode propagator, halving dt.
  // Background outside the spinodal, coarse dt below the stability limit.
  SimConfig cc = cfg;
  cc.params.epsilon = 0.01;
  cc.params.tau = 1.0;
  const double ub = 0.8, delta = 1e-8, t_final = 1e-4;
  const int j = 1;
  const double K2 = std::pow(kTwoPi * j, 2.0);
  Eigen::Matrix2cd A;
  A << -K2 * (cc.params.epsilon * K2 + (3.0 * ub * ub - 1.0) / cc.params.epsilon),
      -K2 * cc.params.theta, -K2 / (cc.params.tau * cc.params.tau),
      -K2 / cc.params.tau;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(A);
  Eigen::Vector2cd ev;
  for (int i = 0; i < 2; ++i) ev(i) = std::exp(es.eigenvalues()(i) * t_final);
  const Eigen::Vector2cd exact = es.eigenvectors() * ev.asDiagonal() *
                                 es.eigenvectors().inverse() *
                                 Eigen::Vector2cd(delta, 0.0);
  auto defect = [&](long nsteps) {
    SimConfig c = cc;
    c.dt = t_final / static_cast<double>(nsteps);
    Simulator sim(c);
    FieldState s0 = constant_state(c.nx, ub, 0.0);
    for (int i = 0; i < c.nx; ++i)
      s0.u[i] += delta * std::cos(kTwoPi * j * i / c.nx);
    sim.set_state(s0);
    sim.advance(nsteps);
    Simulator sb(c);
    sb.set_state(constant_state(c.nx, ub, 0.0));
    sb.advance(nsteps);
    const FieldState out = sim.state(), base = sb.state();
    std::vector<double> du(c.nx), dv(c.nx);
    for (int i = 0; i < c.nx; ++i) du[i] = out.u[i] - base.u[i];
    for (int i = 0; i < c.nx; ++i) dv[i] = out.v[i] - base.v[i];
    return std::hypot(cos_amp(du, j) - exact(0).real(),
                      cos_amp(dv, j) - exact(1).real());
  };
  const double e1 = defect(64), e2 = defect(128);
  const double ratio = e1 / e2;

  const bool ok = worst < 1e-10 && ratio > 1.5 && ratio < 2.6;
  std::printf(
      "[%s] C6 one-step gain: worst entry error %.3g (tol 1e-10), defect "
      "ratio on dt halving %.3f (expect ~2), %.2fs\n",
      ok ? "PASS" : "FAIL", worst, ratio, tm.s());
  return ok;
}

// ---------------------------------------------------------------- check 7

bool check7() {
  Timer tm;
  bool ok = true;
  std::string detail;
  for (double theta : {-2.0, -3.0}) {
    SimConfig cfg;
    cfg.params.epsilon = 0.005;
    cfg.params.tau = 1.0;
    cfg.params.theta = theta;
    cfg.nx = 1024;
    cfg.dt = 6.25e-8; // splitting bias on the speed is ~0.15% at this step
    cfg.t_end = 0.2;
    cfg.output_every = 4000;
    const RunResult res = run(cfg);
    const SpeedMeasurement m = measure_speed(res.diag, 0.1);
    const double xi_pred = solve_xi(theta);
    const double xi_num = m.c_wpeak * cfg.params.tau / 4.0;
    const double rel = std::abs(xi_num - xi_pred) / xi_pred;
    if (!m.ok || rel > 0.05) ok = false;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  " theta=%g: xi_num %.5f vs %.5f (rel %.3f%%)%s;", theta,
                  xi_num, xi_pred, 100.0 * rel, m.ok ? "" : " [no lock]");
    detail += buf;
  }
  std::printf("[%s] C7 measured train speed within 5%%:%s %.0fs\n",
              ok ? "PASS" : "FAIL", detail.c_str(), tm.s());
  return ok;
}

// ---------------------------------------------------------------- check 8

bool check8() {
  Timer tm;
  bool ok = true;
  std::string detail;

  {
    SimConfig cfg;
    cfg.params.epsilon = 0.01;
    cfg.params.tau = 1.0;
    cfg.params.theta = -0.95;
    cfg.nx = 512;
    cfg.dt = 1e-6;
    cfg.t_end = 1.0;
    cfg.init = SimConfig::Init::Stationary;
    cfg.output_every = 2000;
    const RunResult res = run(cfg);
    const double z0 = res.diag.records.front().zcross;
    double drift = 0.0;
    for (const DiagRecord& r : res.diag.records)
      if (std::isfinite(r.zcross))
        drift = std::max(drift, std::abs(r.zcross - z0));
    const double lim = 2.0 / cfg.nx;
    if (!(drift < lim)) ok = false;
    char buf[120];
    std::snprintf(buf, sizeof buf, " pinned side drift %.2e (< %.2e);", drift,
                  lim);
    detail += buf;
  }

  {
    SimConfig cfg;
    cfg.params.epsilon = 0.01;
    cfg.params.tau = 1.0;
    cfg.params.theta = -1.05;
    cfg.nx = 512;
    cfg.dt = 1e-6;
    cfg.t_end = 8.0;
    cfg.init = SimConfig::Init::Stationary;
    cfg.seed_noise = 1e-4;
    cfg.output_every = 4000;
    const RunResult res = run(cfg);
    const SpeedMeasurement m = measure_speed(res.diag, 6.0);
    const double c_sel = 4.0 * solve_xi(-1.05) / cfg.params.tau;
    const double c_num = std::abs(m.c_zero_crossing);
    if (!(c_num > 0.5 * c_sel)) ok = false;
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  " depinned side |c| %.4f vs selected %.4f (need > %.4f)",
                  c_num, c_sel, 0.5 * c_sel);
    detail += buf;
  }

  std::printf("[%s] C8 onset of motion across theta = -1:%s, %.0fs\n",
              ok ? "PASS" : "FAIL", detail.c_str(), tm.s());
  return ok;
}

// ---------------------------------------------------------------- check 9

bool check9() {
  Timer tm;
  bool ok = true;
  std::string why;

  double mass_worst = 0.0;
  auto mass_drift = [&](const Diagnostics& d) {
    const double u0 = d.records.front().mass_u, v0 = d.records.front().mass_v;
    for (const DiagRecord& r : d.records) {
      mass_worst = std::max(mass_worst, std::abs(r.mass_u - u0));
      mass_worst = std::max(mass_worst, std::abs(r.mass_v - v0));
    }
  };

  {
    SimConfig cfg; // reciprocal relaxation run, energy must not increase
    cfg.params.epsilon = 0.05;
    cfg.params.tau = 1.0;
    cfg.params.theta = 1.0;
    cfg.nx = 128;
    cfg.dt = 1e-5;
    cfg.t_end = 0.3;
    cfg.init = SimConfig::Init::Random;
    cfg.random_amp = 0.05;
    cfg.random_modes = 4;
    cfg.output_every = 100;
    const RunResult res = run(cfg);
    mass_drift(res.diag);
    double jump = 0.0;
    for (size_t i = 0; i + 1 < res.diag.records.size(); ++i) {
      const double e0 = res.diag.records[i].energy;
      const double e1 = res.diag.records[i + 1].energy;
      if (!(std::isfinite(e0) && std::isfinite(e1))) {
        ok = false;
        why += " energy not finite;";
        break;
      }
      jump = std::max(jump, e1 - e0);
    }
    if (jump > 1e-9 * (1.0 + std::abs(res.diag.records.front().energy))) {
      ok = false;
      why += " energy increased;";
    }
  }

  {
    SimConfig cfg; // nonreciprocal traveling run
    cfg.params.epsilon = 0.02;
    cfg.params.tau = 1.0;
    cfg.params.theta = -2.0;
    cfg.nx = 256;
    cfg.dt = 1e-6;
    cfg.t_end = 0.02;
    cfg.output_every = 200;
    const RunResult res = run(cfg);
    mass_drift(res.diag);
  }

  if (mass_worst >= 1e-10) {
    ok = false;
    why += " mass drifted;";
  }
  std::printf(
      "[%s] C9 conservation and dissipation: worst mass drift %.3g (tol "
      "1e-10), reciprocal energy nonincreasing%s, %.2fs%s\n",
      ok ? "PASS" : "FAIL", mass_worst,
      why.find("energy") == std::string::npos ? "" : " VIOLATED", tm.s(),
      why.c_str());
  return ok;
}

// --------------------------------------------------------------- check 10

bool check10() {
  Timer tm;
  const double eps = 0.005;

  // Pick the transverse class to box from the toolkit's own scan. Among the
  // near-critical wavenumbers, prefer the one with the slowest marginal
  // oscillation: fast Hopf modes are the first casualties of finite
  // interface width (their period approaches the interface time scale), so
  // the slowest class destabilizes closest to the sharp-interface story.
  std::vector<double> omegas;
  for (int i = 1; i <= 10; ++i) omegas.push_back(2.0 * i);
  const ThresholdTable table = threshold_scan({1.0}, omegas, {0}, 1, true, 1);
  double best = -1e300;
  for (const ThresholdRow& r : table.rows)
    if (r.converged) best = std::max(best, r.theta_star);
  double omega_star = 0.0, lam_slow = 1e300;
  for (const ThresholdRow& r : table.rows) {
    if (!r.converged || r.theta_star < best - 0.5) continue;
    if (r.lambda_star < lam_slow) {
      lam_slow = r.lambda_star;
      omega_star = r.omega;
    }
  }
  if (omega_star == 0.0) {
    std::printf("[FAIL] C10 no converged transverse threshold found\n");
    return false;
  }
  const double rho = kTwoPi / omega_star;

  auto make_cfg = [&](double theta) {
    SimConfig cfg;
    cfg.params.epsilon = eps;
    cfg.params.tau = 1.0;
    cfg.params.theta = theta;
    cfg.params.rho = rho;
    cfg.nx = 512;
    int ny = static_cast<int>(std::ceil(rho / 0.005));
    ny = std::max(128, ny + (ny % 2));
    cfg.ny = ny;
    cfg.dt = 1.8e-7;
    cfg.perturb_q = 1;
    cfg.perturb_k = 0;
    cfg.perturb_amplitude = 1e-3;
    cfg.output_every = 5000;
    return cfg;
  };
  const double grown = 5.0 * eps;
  const double quiet_cap = 0.5 * grown;

  // Quench deep enough to clear the finite-width shift of the onset: the
  // sharp-interface threshold here is near -5.5, but at this width the
  // boxed mode still decays at theta = -12 and only grows from about -14
  // down (the reference experiment sees the same shift, onset between
  // -12 and -10 on a unit square). theta = -16 grows fast and cleanly.
  double spread_unstable = 0.0, t_unstable = 0.0;
  {
    SimConfig cfg = make_cfg(-16.0);
    Simulator sim(cfg);
    sim.init();
    sim.record_diagnostics();
    while (sim.time() < 0.03) {
      sim.advance(5000);
      sim.record_diagnostics();
      const double s = sim.diagnostics().records.back().front_spread;
      if (std::isfinite(s)) spread_unstable = std::max(spread_unstable, s);
      if (spread_unstable > grown) break;
    }
    t_unstable = sim.time();
  }

  // Above the sharp-interface threshold: the same seed must die out.
  double spread_stable = 0.0;
  {
    SimConfig cfg = make_cfg(-3.0);
    Simulator sim(cfg);
    sim.init();
    sim.record_diagnostics();
    while (sim.time() < 0.012) {
      sim.advance(5000);
      sim.record_diagnostics();
      const double s = sim.diagnostics().records.back().front_spread;
      if (std::isfinite(s)) spread_stable = std::max(spread_stable, s);
    }
  }

  const bool ok = spread_unstable > grown && spread_stable < quiet_cap;
  std::printf(
      "[%s] C10 transverse selection in 2D (omega* = %.1f): corrugation "
      "%.4f > %.3f by t = %.4f at theta = -16; %.4f < %.4f at theta = -3, "
      "%.0fs\n",
      ok ? "PASS" : "FAIL", omega_star, spread_unstable, grown, t_unstable,
      spread_stable, quiet_cap, tm.s());
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  bool (*checks[])() = {check1, check2, check3, check4, check5,
                        check6, check7, check8, check9, check10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "unknown check '%s' (expected 1..10)\n", argv[i]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (int n = 1; n <= 10; ++n) selected.push_back(n);

  int failures = 0;
  for (int n : selected) {
    try {
      if (!checks[n - 1]()) ++failures;
    } catch (const std::exception& e) {
      std::printf("[FAIL] C%d aborted: %s\n", n, e.what());
      ++failures;
    }
  }
  if (failures == 0) {
    std::printf("all %d selected checks passed\n",
                static_cast<int>(selected.size()));
  } else {
    std::printf("%d of %d selected checks failed\n", failures,
                static_cast<int>(selected.size()));
  }
  return failures == 0 ? 0 : 1;
}
