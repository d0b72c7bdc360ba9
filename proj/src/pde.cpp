#include "nrms/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nrms/io.hpp"
#include "nrms/kernels.hpp"

namespace nrms {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// The planner is not thread safe; executing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double wrap_half(double d) { return d - std::round(d); }

double wrap01(double x) {
  double y = x - std::floor(x);
  return (y >= 1.0) ? y - 1.0 : y;
}

double mean_of(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s / static_cast<double>(a.size());
}

// Least-squares slope of x against t.
double fit_slope(const std::vector<double>& t, const std::vector<double>& x) {
  const size_t n = t.size();
  double tb = 0.0, xb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    tb += t[i];
    xb += x[i];
  }
  tb /= static_cast<double>(n);
  xb /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (t[i] - tb) * (x[i] - xb);
    den += (t[i] - tb) * (t[i] - tb);
  }
  return den > 0.0 ? num / den : kNaN;
}

// Sign changes of u along one periodic row, positions in [0,1) by linear
// interpolation. `rising` keeps only crossings where u goes - to +.
void scan_crossings(const double* row, int nx, std::vector<double>* all,
                    std::vector<double>* rising) {
  const double dx = 1.0 / nx;
  for (int i = 0; i < nx; ++i) {
    const double u0 = row[i];
    const double u1 = row[(i + 1) % nx];
    double pos;
    bool up;
    if (u0 == 0.0) {
      if (u1 == 0.0) continue;
      pos = i * dx;
      up = u1 > 0.0;
    } else if (u0 * u1 < 0.0) {
      pos = (i + u0 / (u0 - u1)) * dx;
      up = u0 < 0.0;
    } else {
      continue;
    }
    if (all) all->push_back(pos);
    if (rising && up) rising->push_back(pos);
  }
}

struct Peak {
  double pos;
  double value;
};

// Local maxima of one periodic row with parabolic sub-grid refinement.
std::vector<Peak> peak_candidates(const double* row, int nx) {
  std::vector<Peak> out;
  const double dx = 1.0 / nx;
  for (int i = 0; i < nx; ++i) {
    const double wl = row[(i + nx - 1) % nx];
    const double wc = row[i];
    const double wr = row[(i + 1) % nx];
    if (!(wc > wl && wc >= wr)) continue;
    const double denom = wl - 2.0 * wc + wr;
    double delta = 0.0;
    if (denom != 0.0) delta = 0.5 * (wl - wr) / denom;
    if (!(std::abs(delta) <= 0.5)) delta = 0.0;
    out.push_back({wrap01((i + delta) * dx), wc});
  }
  return out;
}

double nearest_position(const std::vector<double>& cand, double target) {
  double best = cand.front();
  double bd = std::abs(wrap_half(cand.front() - target));
  for (double c : cand) {
    const double d = std::abs(wrap_half(c - target));
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw std::runtime_error("expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric value for " + key + ": '" + v + "'");
  }
  if (pos != v.size())
    throw std::runtime_error("bad numeric value for " + key + ": '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  const int i = static_cast<int>(std::llround(x));
  if (x != static_cast<double>(i))
    throw std::runtime_error("expected an integer for " + key + ": '" + v + "'");
  return i;
}

void write_raw_doubles(const std::string& path, const std::vector<double>& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(a.data()),
           static_cast<std::streamsize>(a.size() * sizeof(double)));
  if (!os) throw std::runtime_error("short write to " + path);
}

void apply_seed_noise(FieldState& s, const SimConfig& cfg) {
  if (cfg.seed_noise <= 0.0) return;
  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> noise(s.v.size());
  double m = 0.0;
  for (double& x : noise) {
    x = uni(rng);
    m += x;
  }
  m /= static_cast<double>(noise.size());
  for (size_t i = 0; i < s.v.size(); ++i)
    s.v[i] += cfg.seed_noise * (noise[i] - m);
}

FieldState build_random(const SimConfig& cfg) {
  const int nx = cfg.nx, ny = cfg.ny;
  FieldState s;
  s.nx = nx;
  s.ny = ny;
  s.t = 0.0;
  s.u.assign(static_cast<size_t>(nx) * ny, 0.0);
  s.v.assign(static_cast<size_t>(nx) * ny, 0.0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int mx = cfg.random_modes;
  const int my = (ny > 1) ? cfg.random_modes : 0;

  struct Wave {
    double jx, jy, amp, phase;
  };
  auto draw_waves = [&]() {
    std::vector<Wave> w;
    for (int jx = 0; jx <= mx; ++jx) {
      for (int jy = -my; jy <= my; ++jy) {
        if (jx == 0 && jy <= 0) continue;
        const double a = uni(rng) / (1.0 + jx * jx + jy * jy);
        const double ph = kPi * uni(rng);
        w.push_back({static_cast<double>(jx), static_cast<double>(jy), a, ph});
      }
    }
    return w;
  };
  auto fill = [&](std::vector<double>& f, double mean, double amp) {
    const auto waves = draw_waves();
    for (int iy = 0; iy < ny; ++iy) {
      const double fy = static_cast<double>(iy) / ny;
      for (int ix = 0; ix < nx; ++ix) {
        const double fx = static_cast<double>(ix) / nx;
        double acc = 0.0;
        for (const Wave& w : waves)
          acc += w.amp * std::cos(2.0 * kPi * (w.jx * fx + w.jy * fy) + w.phase);
        f[static_cast<size_t>(iy) * nx + ix] = mean + amp * acc;
      }
    }
  };
  fill(s.u, cfg.u_mean, cfg.random_amp);
  fill(s.v, cfg.v_mean, cfg.random_amp);
  apply_seed_noise(s, cfg);
  return s;
}

} // namespace

void SimConfig::validate() const {
  params.validate();
  if (nx < 8 || nx % 2 != 0)
    throw std::invalid_argument("nx must be even and at least 8");
  if (!(ny == 1 || (ny >= 8 && ny % 2 == 0)))
    throw std::invalid_argument("ny must be 1, or even and at least 8");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(stabilization >= 0.0))
    throw std::invalid_argument("stabilization must be nonnegative");
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be at least 1");
  if (output_every < 1)
    throw std::invalid_argument("output_every must be at least 1");
  if (snapshot_every < 0)
    throw std::invalid_argument("snapshot_every must be nonnegative");
  if (!(std::abs(perturb_amplitude) < 1.0 / (8.0 * n_pairs)))
    throw std::invalid_argument(
        "perturb_amplitude must stay below an eighth of the front spacing");
  if (random_modes < 1)
    throw std::invalid_argument("random_modes must be at least 1");
}

std::vector<std::string> SimConfig::soft_warnings() const {
  std::vector<std::string> w;
  if (1.0 / nx > params.epsilon / 2.0)
    w.push_back("dx exceeds eps/2; interfaces are under-resolved in x");
  if (ny > 1 && params.rho / ny > params.epsilon / 2.0)
    w.push_back("dy exceeds eps/2; interfaces are under-resolved in y");
  return w;
}

FieldState init_wavetrain(const SimConfig& cfg) {
  cfg.validate();
  const int nx = cfg.nx, ny = cfg.ny, n2 = 2 * cfg.n_pairs;
  const ModelParams& p = cfg.params;
  const bool traveling = cfg.init == SimConfig::Init::Traveling;

  WaveTrainProfile prof(p.theta, p.tau, cfg.n_pairs);

  FieldState s;
  s.nx = nx;
  s.ny = ny;
  s.t = 0.0;
  s.u.assign(static_cast<size_t>(nx) * ny, 0.0);
  s.v.assign(static_cast<size_t>(nx) * ny, 0.0);

  std::vector<double> fronts(n2);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = p.rho * iy / ny;
    const double cy = std::cos(2.0 * kPi * cfg.perturb_q * y / p.rho);
    for (int n = 1; n <= n2; ++n) {
      const double shift = cfg.perturb_amplitude *
                           std::cos(kPi * cfg.perturb_k * (n - 1) / cfg.n_pairs) *
                           cy;
      fronts[n - 1] = wrap01(static_cast<double>(n) / n2 + shift);
    }
    for (int ix = 0; ix < nx; ++ix) {
      const double x = static_cast<double>(ix) / nx;
      // Signed distance to the nearest front; its index parity fixes the
      // side on which u is positive.
      int nbest = 0;
      double dbest = wrap_half(x - fronts[0]);
      for (int n = 1; n < n2; ++n) {
        const double d = wrap_half(x - fronts[n]);
        if (std::abs(d) < std::abs(dbest)) {
          dbest = d;
          nbest = n;
        }
      }
      const double dist = (nbest % 2 == 0) ? -dbest : dbest;
      const double u = heteroclinic(dist / p.epsilon);
      const size_t idx = static_cast<size_t>(iy) * nx + ix;
      s.u[idx] = u;
      s.v[idx] = (traveling ? prof.v0(x) : 0.0) - u / p.tau;
    }
  }
  apply_seed_noise(s, cfg);
  return s;
}

struct Simulator::Impl {
  SimConfig cfg;
  int nx, ny, nkx, nmodes, npts;
  double t = 0.0;
  long steps = 0;

  std::vector<double> ru;   // physical u, consistent with cu
  std::vector<cdouble> cu;  // unnormalized transforms of u and v
  std::vector<cdouble> cv;

  double* ra = nullptr;
  fftw_complex* ca = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  std::vector<double> kxv, kyv, k2, mask;
  Diagnostics diag;

  explicit Impl(const SimConfig& c) : cfg(c) {
    cfg.validate();
    nx = cfg.nx;
    ny = cfg.ny;
    nkx = nx / 2 + 1;
    nmodes = nkx * ny;
    npts = nx * ny;

    ru.assign(npts, 0.0);
    cu.assign(nmodes, 0.0);
    cv.assign(nmodes, 0.0);

    ra = fftw_alloc_real(npts);
    ca = fftw_alloc_complex(nmodes);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_2d(ny, nx, ra, ca, FFTW_ESTIMATE);
      inv = fftw_plan_dft_c2r_2d(ny, nx, ca, ra, FFTW_ESTIMATE);
    }
    if (!fwd || !inv) throw std::runtime_error("fftw plan creation failed");

    kxv.resize(nmodes);
    kyv.resize(nmodes);
    k2.resize(nmodes);
    mask.resize(nmodes);
    const int cutx = nx / 3;
    const int cuty = ny / 3;
    for (int iy = 0; iy < ny; ++iy) {
      const int jy = (iy <= ny / 2) ? iy : iy - ny;
      const double ky = 2.0 * kPi * jy / cfg.params.rho;
      for (int ikx = 0; ikx < nkx; ++ikx) {
        const int m = iy * nkx + ikx;
        const double kx = 2.0 * kPi * ikx;
        kxv[m] = kx;
        kyv[m] = ky;
        k2[m] = kx * kx + ky * ky;
        const bool keep =
            !cfg.dealias || (ikx <= cutx && (ny == 1 || std::abs(jy) <= cuty));
        mask[m] = keep ? 1.0 : 0.0;
      }
    }
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(ra);
    fftw_free(ca);
  }

  void forward_from(const std::vector<double>& r, std::vector<cdouble>& out) const {
    std::copy(r.begin(), r.end(), ra);
    fftw_execute(fwd);
    out.resize(nmodes);
    for (int m = 0; m < nmodes; ++m) out[m] = cdouble(ca[m][0], ca[m][1]);
  }

  void inverse_to(const std::vector<cdouble>& c, std::vector<double>& out) const {
    for (int m = 0; m < nmodes; ++m) {
      ca[m][0] = c[m].real();
      ca[m][1] = c[m].imag();
    }
    fftw_execute(inv);
    out.resize(npts);
    const double norm = 1.0 / npts;
    for (int i = 0; i < npts; ++i) out[i] = ra[i] * norm;
  }

  void do_step() {
    const double dtv = cfg.dt;
    const double eps = cfg.params.epsilon;
    const double tau = cfg.params.tau;
    const double th = cfg.params.theta;
    const double S = cfg.stabilization;

    for (int i = 0; i < npts; ++i) {
      const double u = ru[i];
      ra[i] = u * u * u - u;
    }
    fftw_execute(fwd);

    for (int m = 0; m < nmodes; ++m) {
      const double q2 = k2[m];
      const cdouble fh = cdouble(ca[m][0], ca[m][1]) * mask[m];
      const cdouble uh = cu[m];
      const cdouble vh = cv[m];
      cu[m] = (uh - dtv * q2 * (fh / eps - S * uh + th * vh)) /
              (1.0 + dtv * (eps * q2 * q2 + S * q2));
      cv[m] = (vh - dtv * q2 * uh / (tau * tau)) / (1.0 + dtv * q2 / tau);
    }

    for (int m = 0; m < nmodes; ++m) {
      ca[m][0] = cu[m].real();
      ca[m][1] = cu[m].imag();
    }
    fftw_execute(inv);
    const double norm = 1.0 / npts;
    double amax = 0.0;
    for (int i = 0; i < npts; ++i) {
      ru[i] = ra[i] * norm;
      amax = std::max(amax, std::abs(ru[i]));
    }
    t += dtv;
    ++steps;
    if (!(amax <= 10.0)) throw SimulationDiverged(t);
  }
};

Simulator::Simulator(const SimConfig& cfg) : impl_(new Impl(cfg)) {}
Simulator::~Simulator() = default;

void Simulator::init() {
  FieldState s = (impl_->cfg.init == SimConfig::Init::Random)
                     ? build_random(impl_->cfg)
                     : init_wavetrain(impl_->cfg);
  set_state(s);
}

void Simulator::set_state(const FieldState& s) {
  Impl& im = *impl_;
  if (s.nx != im.nx || s.ny != im.ny ||
      s.u.size() != static_cast<size_t>(im.npts) ||
      s.v.size() != static_cast<size_t>(im.npts))
    throw std::invalid_argument("field state does not match the configured grid");
  im.ru = s.u;
  im.forward_from(s.u, im.cu);
  im.forward_from(s.v, im.cv);
  im.t = s.t;
}

FieldState Simulator::state() const {
  const Impl& im = *impl_;
  FieldState s;
  s.nx = im.nx;
  s.ny = im.ny;
  s.t = im.t;
  s.u = im.ru;
  im.inverse_to(im.cv, s.v);
  return s;
}

void Simulator::step() { impl_->do_step(); }

void Simulator::advance(long nsteps) {
  for (long i = 0; i < nsteps; ++i) impl_->do_step();
}

double Simulator::time() const { return impl_->t; }
long Simulator::step_count() const { return impl_->steps; }
const SimConfig& Simulator::config() const { return impl_->cfg; }
Diagnostics& Simulator::diagnostics() { return impl_->diag; }

std::vector<double> Simulator::compute_w() const {
  const Impl& im = *impl_;
  const double eps = im.cfg.params.epsilon;
  const double th = im.cfg.params.theta;

  std::vector<cdouble> tmp(im.nmodes);
  for (int m = 0; m < im.nmodes; ++m) tmp[m] = eps * im.k2[m] * im.cu[m];
  std::vector<double> lap, v;
  im.inverse_to(tmp, lap); // -eps Lap u
  im.inverse_to(im.cv, v);

  std::vector<double> w(im.npts);
  for (int i = 0; i < im.npts; ++i) {
    const double u = im.ru[i];
    w[i] = lap[i] + (u * u * u - u) / eps + th * v[i];
  }
  return w;
}

void Simulator::record_diagnostics() {
  Impl& im = *impl_;
  const int nx = im.nx, ny = im.ny;
  const ModelParams& p = im.cfg.params;
  const double gamma = surface_tension();
  const double area = p.rho;

  DiagRecord r;
  r.t = im.t;
  r.mass_u = mean_of(im.ru);

  std::vector<double> v;
  im.inverse_to(im.cv, v);
  r.mass_v = mean_of(v);

  std::vector<cdouble> tmp(im.nmodes);
  std::vector<double> gx, gy;
  for (int m = 0; m < im.nmodes; ++m)
    tmp[m] = im.cu[m] * cdouble(0.0, im.kxv[m]);
  im.inverse_to(tmp, gx);
  if (ny > 1) {
    for (int m = 0; m < im.nmodes; ++m)
      tmp[m] = im.cu[m] * cdouble(0.0, im.kyv[m]);
    im.inverse_to(tmp, gy);
  }

  double grad_sq = 0.0, well = 0.0, v_sq = 0.0, energy = 0.0;
  const bool has_energy = p.theta > 0.0;
  for (int i = 0; i < im.npts; ++i) {
    const double u = im.ru[i];
    const double g2v = gx[i] * gx[i] + (ny > 1 ? gy[i] * gy[i] : 0.0);
    const double fw = 0.25 * (u * u - 1.0) * (u * u - 1.0);
    grad_sq += g2v;
    well += fw;
    v_sq += v[i] * v[i];
    if (has_energy) {
      const double tv = p.tau * v[i] + u;
      energy += 0.5 * p.epsilon * g2v + fw / p.epsilon +
                p.theta / (2.0 * p.tau) * (tv * tv - u * u);
    }
  }
  const double inv_n = 1.0 / im.npts;
  grad_sq *= inv_n;
  well *= inv_n;
  v_sq *= inv_n;
  const double perimeter =
      area * (0.5 * p.epsilon * grad_sq + well / p.epsilon) / gamma;
  r.lyapunov = perimeter + p.tau * p.theta / (4.0 * gamma) * (area * v_sq);
  r.energy = has_energy ? area * energy * inv_n : kNaN;

  // Front positions from the first row.
  const double* row = im.ru.data();
  std::vector<double> all, rising;
  scan_crossings(row, nx, &all, &rising);
  std::sort(all.begin(), all.end());
  r.fronts.assign(2 * im.cfg.n_pairs, kNaN);
  for (size_t i = 0; i < r.fronts.size() && i < all.size(); ++i)
    r.fronts[i] = all[i];

  // Track the w maximum along the first row.
  const std::vector<double> w = compute_w();
  const auto peaks = peak_candidates(w.data(), nx);
  Diagnostics& d = im.diag;
  if (!peaks.empty()) {
    if (!d.wpeak_started) {
      const Peak* best = &peaks.front();
      for (const Peak& pk : peaks)
        if (pk.value > best->value) best = &pk;
      d.wpeak_prev = best->pos;
      d.wpeak_acc = best->pos;
      d.wpeak_started = true;
    } else {
      std::vector<double> pos;
      for (const Peak& pk : peaks) pos.push_back(pk.pos);
      const double pk = nearest_position(pos, d.wpeak_prev);
      const double jump = wrap_half(pk - d.wpeak_prev);
      if (std::abs(jump) > 0.25) d.wpeak_lock_lost = true;
      d.wpeak_acc += jump;
      d.wpeak_prev = pk;
    }
  }
  r.wpeak = d.wpeak_started ? d.wpeak_acc : kNaN;
  r.wpeak_ok = !d.wpeak_lock_lost;

  // Track one rising u crossing the same way.
  if (!rising.empty()) {
    if (!d.zcross_started) {
      d.zcross_prev = rising.front();
      d.zcross_acc = rising.front();
      d.zcross_started = true;
    } else {
      const double zc = nearest_position(rising, d.zcross_prev);
      d.zcross_acc += wrap_half(zc - d.zcross_prev);
      d.zcross_prev = zc;
    }
  }
  r.zcross = d.zcross_started ? d.zcross_acc : kNaN;

  // Transverse spread of one front family.
  if (ny == 1) {
    r.front_spread = 0.0;
  } else if (rising.empty()) {
    r.front_spread = kNaN;
  } else {
    const double ref = rising.front();
    double lo = 0.0, hi = 0.0;
    bool ok = true;
    for (int iy = 0; iy < ny && ok; ++iy) {
      std::vector<double> rr;
      scan_crossings(im.ru.data() + static_cast<size_t>(iy) * nx, nx, nullptr,
                     &rr);
      if (rr.empty()) {
        ok = false;
        break;
      }
      const double off = wrap_half(nearest_position(rr, ref) - ref);
      lo = std::min(lo, off);
      hi = std::max(hi, off);
    }
    r.front_spread = ok ? hi - lo : kNaN;
  }

  d.records.push_back(std::move(r));

  // Running speed estimate over the trailing half of the samples.
  DiagRecord& back = d.records.back();
  const size_t n = d.records.size();
  const size_t j0 = n / 2;
  std::vector<double> ts, xs;
  for (size_t j = j0; j < n; ++j) {
    if (std::isfinite(d.records[j].wpeak)) {
      ts.push_back(d.records[j].t);
      xs.push_back(d.records[j].wpeak);
    }
  }
  back.speed_estimate =
      (ts.size() >= 10 && !d.wpeak_lock_lost) ? fit_slope(ts, xs) : kNaN;
}

FieldState step_once(const FieldState& s, const SimConfig& cfg) {
  Simulator sim(cfg);
  sim.set_state(s);
  sim.step();
  return sim.state();
}

RunResult run(const SimConfig& cfg) {
  cfg.validate();
  RunResult out;
  Simulator sim(cfg);
  sim.init();
  sim.record_diagnostics();

  const long total = std::llround(cfg.t_end / cfg.dt);
  const bool snaps = cfg.snapshot_every > 0 && !cfg.outdir.empty();
  const std::string prefix =
      cfg.outdir + "/" + (cfg.tag.empty() ? "" : cfg.tag + "_");

  nlohmann::json entries = nlohmann::json::array();
  auto write_snapshot = [&](long s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08ld", s);
    const FieldState st = sim.state();
    const std::string fu = prefix + "u_" + buf + ".f64";
    const std::string fv = prefix + "v_" + buf + ".f64";
    write_raw_doubles(fu, st.u);
    write_raw_doubles(fv, st.v);
    entries.push_back({{"step", s}, {"t", st.t}, {"u", fu}, {"v", fv}});
    out.outputs.push_back(fu);
    out.outputs.push_back(fv);
  };
  if (snaps) write_snapshot(0);

  for (long s = 1; s <= total; ++s) {
    sim.step();
    if (s % cfg.output_every == 0 || s == total) sim.record_diagnostics();
    if (snaps && (s % cfg.snapshot_every == 0 || s == total)) write_snapshot(s);
  }

  if (snaps) {
    nlohmann::json index = {{"nx", cfg.nx},
                            {"ny", cfg.ny},
                            {"rho", cfg.params.rho},
                            {"epsilon", cfg.params.epsilon},
                            {"tau", cfg.params.tau},
                            {"theta", cfg.params.theta},
                            {"dt", cfg.dt},
                            {"layout", "row-major, y outer, x inner, float64"},
                            {"snapshots", entries}};
    const std::string fi = prefix + "fields.json";
    std::ofstream os(fi);
    os << index.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write " + fi);
    out.outputs.push_back(fi);
  }

  out.final_state = sim.state();
  out.diag = std::move(sim.diagnostics());
  return out;
}

SpeedMeasurement measure_speed(const Diagnostics& diag, double transient_cut) {
  SpeedMeasurement m;
  std::vector<double> ts, xs, zts, zxs;
  bool lock_ok = true;
  for (const DiagRecord& r : diag.records) {
    if (r.t < transient_cut) continue;
    if (std::isfinite(r.wpeak)) {
      ts.push_back(r.t);
      xs.push_back(r.wpeak);
      lock_ok = lock_ok && r.wpeak_ok;
    }
    if (std::isfinite(r.zcross)) {
      zts.push_back(r.t);
      zxs.push_back(r.zcross);
    }
  }
  m.c_zero_crossing = zts.size() >= 10 ? fit_slope(zts, zxs) : kNaN;
  if (!lock_ok) {
    m.c_wpeak = kNaN;
    m.message = "front peak lock lost (jump above a quarter period)";
  } else if (ts.size() < 10) {
    m.c_wpeak = kNaN;
    m.message = "too few samples after the transient cut";
  } else {
    m.c_wpeak = fit_slope(ts, xs);
    m.ok = std::isfinite(m.c_wpeak);
  }
  return m;
}

void write_diagnostics_csv(std::ostream& os, const Diagnostics& diag,
                           int n_pairs) {
  os << "t,mass_u,mass_v,energy,lyapunov_proxy";
  for (int n = 1; n <= 2 * n_pairs; ++n) os << ",front_" << n;
  os << ",wpeak,zcross,front_spread,speed_estimate,wpeak_ok\n";
  for (const DiagRecord& r : diag.records) {
    os << format_g17(r.t) << ',' << format_g17(r.mass_u) << ','
       << format_g17(r.mass_v) << ',' << format_g17(r.energy) << ','
       << format_g17(r.lyapunov);
    for (int n = 0; n < 2 * n_pairs; ++n) {
      const double f = (n < static_cast<int>(r.fronts.size())) ? r.fronts[n] : kNaN;
      os << ',' << format_g17(f);
    }
    os << ',' << format_g17(r.wpeak) << ',' << format_g17(r.zcross) << ','
       << format_g17(r.front_spread) << ',' << format_g17(r.speed_estimate)
       << ',' << (r.wpeak_ok ? 1 : 0) << '\n';
  }
}

void apply_config_kv(SimConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "epsilon") cfg.params.epsilon = parse_double(key, value);
  else if (key == "tau") cfg.params.tau = parse_double(key, value);
  else if (key == "theta") cfg.params.theta = parse_double(key, value);
  else if (key == "rho") cfg.params.rho = parse_double(key, value);
  else if (key == "nx") cfg.nx = parse_int(key, value);
  else if (key == "ny") cfg.ny = parse_int(key, value);
  else if (key == "dt") cfg.dt = parse_double(key, value);
  else if (key == "t_end") cfg.t_end = parse_double(key, value);
  else if (key == "stabilization") cfg.stabilization = parse_double(key, value);
  else if (key == "dealias") cfg.dealias = parse_bool(value);
  else if (key == "n_pairs") cfg.n_pairs = parse_int(key, value);
  else if (key == "init") {
    if (value == "traveling") cfg.init = SimConfig::Init::Traveling;
    else if (value == "stationary") cfg.init = SimConfig::Init::Stationary;
    else if (value == "random") cfg.init = SimConfig::Init::Random;
    else throw std::runtime_error("unknown init mode '" + value + "'");
  } else if (key == "perturb_q") cfg.perturb_q = parse_int(key, value);
  else if (key == "perturb_k") cfg.perturb_k = parse_int(key, value);
  else if (key == "perturb_amplitude")
    cfg.perturb_amplitude = parse_double(key, value);
  else if (key == "seed_noise") cfg.seed_noise = parse_double(key, value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "u_mean") cfg.u_mean = parse_double(key, value);
  else if (key == "v_mean") cfg.v_mean = parse_double(key, value);
  else if (key == "random_amp") cfg.random_amp = parse_double(key, value);
  else if (key == "random_modes") cfg.random_modes = parse_int(key, value);
  else if (key == "output_every") cfg.output_every = parse_int(key, value);
  else if (key == "snapshot_every") cfg.snapshot_every = parse_int(key, value);
  else if (key == "outdir") cfg.outdir = value;
  else if (key == "tag") cfg.tag = value;
  else throw std::runtime_error("unknown config key '" + key + "'");
}

SimConfig load_config(const std::string& path) {
  SimConfig cfg;
  for (const auto& [key, value] : read_config_file(path))
    apply_config_kv(cfg, key, value);
  return cfg;
}

} // namespace nrms
