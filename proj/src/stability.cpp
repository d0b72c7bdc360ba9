#include "nrms/stability.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "nrms/io.hpp"
#include "nrms/kernels.hpp"
#include "nrms/wavetrain.hpp"

namespace nrms {

bool mode_conserves_volume(int k, int n_pairs) {
  const int m = ((k % (2 * n_pairs)) + 2 * n_pairs) % (2 * n_pairs);
  return m != n_pairs;
}

cdouble mu_lambda(cdouble lambda, double omega, double tau) {
  return std::sqrt(cdouble(omega * omega, 0.0) + tau * lambda);
}

cdouble f_stationary(cdouble lambda, double omega, int k, double theta,
                     double tau, int n_pairs) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("f_stationary needs omega > 0 (use the "
                                "omega = 0 dispersion builders)");
  }
  const cdouble mu = mu_lambda(lambda, omega, tau);
  return 0.5 * surface_tension() * omega * omega -
         lambda * zeta1(k, 0.0, cdouble(omega), n_pairs) -
         lambda * theta * zeta1(k, 0.0, mu, n_pairs);
}

namespace {

// tanh(z)/z, with the even power series taking over near z = 0 where the
// ratio would lose digits.
cdouble tanh_over_z(cdouble z) {
  if (std::abs(z) < 1e-2) {
    const cdouble z2 = z * z;
    return 1.0 + z2 * (-1.0 / 3.0 +
                       z2 * (2.0 / 15.0 +
                             z2 * (-17.0 / 315.0 + z2 * (62.0 / 2835.0))));
  }
  return std::tanh(z) / z;
}

} // namespace

cdouble zero_mode_stationary(cdouble lambda, double theta, double tau,
                             int n_pairs) {
  const double n4 = 4.0 * n_pairs;
  const cdouble z = std::sqrt(tau * lambda) / n4;
  return lambda / n4 * (1.0 + theta * tanh_over_z(z));
}

cdouble f_traveling(cdouble lambda, double omega, int k, double theta,
                    double tau, int n_pairs, double c0) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("f_traveling needs omega > 0 (use the "
                                "omega = 0 dispersion builders)");
  }
  if (!(c0 > 0.0)) {
    throw std::invalid_argument("f_traveling needs c0 > 0");
  }
  const double a = tau * c0;
  const double xi = a / (4.0 * n_pairs);
  const cdouble mu = mu_lambda(lambda, omega, tau);
  const cdouble z1w = zeta1(k, 0.0, cdouble(omega), n_pairs);
  const cdouble z2w = zeta2(k, 0.0, cdouble(omega), n_pairs);
  const cdouble z1m = zeta1(k, a, mu, n_pairs);
  const cdouble z2m = zeta2(k, a, mu, n_pairs);
  const double em = std::exp(-2.0 * xi);
  const double front_const = 0.5 * c0 * (em + 1.0 + 2.0 * theta) / (em + 1.0);
  return -lambda * z1w - theta * (lambda + tau * c0 * c0) * z1m + c0 * z2w +
         theta * c0 * z2m + 0.5 * surface_tension() * omega * omega -
         front_const;
}

Dispersion make_stationary_dispersion(double omega, int k, double theta,
                                      double tau, int n_pairs) {
  if (omega < 0.0) throw std::invalid_argument("omega must be nonnegative");
  Dispersion d;
  if (omega > 0.0) {
    d.f = [=](cdouble l) {
      return f_stationary(l, omega, k, theta, tau, n_pairs);
    };
    d.tail_coefficient = -zeta1(k, 0.0, cdouble(omega), n_pairs);
    d.indent_origin = false;
    return d;
  }
  if (!mode_conserves_volume(k, n_pairs)) {
    throw std::invalid_argument(
        "(omega = 0, k = N) violates the volume constraint");
  }
  // Flat stationary trains exist for arbitrary front spacing, so every
  // omega = 0 repositioning class carries a neutral root at lambda = 0;
  // the counter indents around it.
  if (((k % (2 * n_pairs)) + 2 * n_pairs) % (2 * n_pairs) == 0) {
    d.f = [=](cdouble l) {
      return zero_mode_stationary(l, theta, tau, n_pairs);
    };
    d.tail_coefficient = 1.0 / (4.0 * n_pairs);
    d.indent_origin = true;
    return d;
  }
  const cdouble z1_limit = zeta1_zero_b_limit(k, n_pairs);
  d.f = [=](cdouble l) {
    const cdouble mu = std::sqrt(tau * l);
    return -l * (z1_limit + theta * zeta1(k, 0.0, mu, n_pairs));
  };
  d.tail_coefficient = -z1_limit;
  d.indent_origin = true;
  return d;
}

Dispersion make_traveling_dispersion(double omega, int k, double theta,
                                     double tau, int n_pairs) {
  if (omega < 0.0) throw std::invalid_argument("omega must be nonnegative");
  const double c0 = wave_speed(theta, tau, n_pairs);
  if (!(c0 > 0.0)) {
    throw std::invalid_argument("traveling analysis requires theta < -1");
  }
  Dispersion d;
  if (omega > 0.0) {
    d.f = [=](cdouble l) {
      return f_traveling(l, omega, k, theta, tau, n_pairs, c0);
    };
    d.tail_coefficient = -zeta1(k, 0.0, cdouble(omega), n_pairs);
    d.indent_origin = false;
    return d;
  }
  if (!mode_conserves_volume(k, n_pairs)) {
    throw std::invalid_argument(
        "(omega = 0, k = N) violates the volume constraint");
  }
  const double a = tau * c0;
  const double xi = a / (4.0 * n_pairs);
  const double em = std::exp(-2.0 * xi);
  const double front_const = 0.5 * c0 * (em + 1.0 + 2.0 * theta) / (em + 1.0);
  const cdouble z1_limit = zeta1_zero_b_limit(k, n_pairs);
  const cdouble z2_limit = zeta2_zero_b_limit(k, n_pairs);
  d.f = [=](cdouble l) {
    const cdouble mu = std::sqrt(tau * l);
    return -l * z1_limit - theta * (l + tau * c0 * c0) *
               zeta1(k, a, mu, n_pairs) +
           c0 * z2_limit + theta * c0 * zeta2(k, a, mu, n_pairs) - front_const;
  };
  d.tail_coefficient = -z1_limit;
  if (((k % (2 * n_pairs)) + 2 * n_pairs) % (2 * n_pairs) == 0) {
    // In-phase translation: lambda = 0 is a root identically.
    d.indent_origin = true;
  } else {
    // Detect a neutral root numerically: probe just right of the origin.
    const double probe = 1e-6;
    const double scale = c0 * (1.0 + std::abs(theta));
    d.indent_origin = std::abs(d.f(cdouble(probe, 0.0))) < 1e-4 * scale;
  }
  return d;
}

namespace {

// Descending geometric ladder hi, hi/2, ..., ending exactly at lo.
std::vector<double> geometric_down(double hi, double lo) {
  std::vector<double> out;
  out.push_back(hi);
  for (double t = hi / 2.0; t > lo * 1.5; t /= 2.0) out.push_back(t);
  out.push_back(lo);
  return out;
}

struct Segment {
  enum Kind { Axis, Arc } kind; // Axis: lambda = i t; Arc: lambda = r e^{i t}
  std::vector<double> knots;
};

} // namespace

DispersionTrace count_unstable(const Dispersion& disp,
                               const WindingOptions& opts) {
  if (!disp.f) throw std::invalid_argument("empty dispersion function");
  if (disp.tail_coefficient == cdouble(0.0, 0.0)) {
    throw std::invalid_argument("tail coefficient must be nonzero");
  }
  const auto& f = disp.f;
  const cdouble C = disp.tail_coefficient;

  DispersionTrace tr;

  // Grow Lambda until the linear tail dominates at both ends; the tail
  // argument change beyond Lambda is then arg(1 + r) with r the relative
  // deviation, accounted exactly below.
  double L = opts.lambda_max;
  cdouble r_top, r_bot;
  for (;;) {
    const cdouble f_top = f(cdouble(0.0, L));
    const cdouble f_bot = f(cdouble(0.0, -L));
    r_top = f_top / (C * cdouble(0.0, L)) - 1.0;
    r_bot = f_bot / (C * cdouble(0.0, -L)) - 1.0;
    if (std::max(std::abs(r_top), std::abs(r_bot)) < opts.asymptote_tol) break;
    L *= 4.0;
    if (L > 1e14) {
      throw std::runtime_error(
          "winding count: linear asymptote never dominated the trace");
    }
  }
  tr.tail_cut = L;

  const double r_ind = opts.indent_radius;
  std::vector<Segment> segments;
  if (disp.indent_origin) {
    segments.push_back({Segment::Axis, geometric_down(L, r_ind)});
    std::vector<double> phis;
    for (int i = 0; i <= 8; ++i) phis.push_back(M_PI / 2 - i * M_PI / 8);
    segments.push_back({Segment::Arc, std::move(phis)});
    auto bottom = geometric_down(L, r_ind);
    std::reverse(bottom.begin(), bottom.end());
    for (double& t : bottom) t = -t;
    segments.push_back({Segment::Axis, std::move(bottom)});
  } else {
    auto top = geometric_down(L, 1e-9);
    auto bottom = top;
    std::reverse(bottom.begin(), bottom.end());
    std::vector<double> knots = top;
    knots.push_back(0.0);
    for (double t : bottom) knots.push_back(-t);
    segments.push_back({Segment::Axis, std::move(knots)});
  }

  double total = 0.0;
  double arg_cum = 0.0;
  bool first = true;
  double t_cur = 0.0;
  cdouble f_cur;
  size_t accepted = 0;

  for (const Segment& seg : segments) {
    const auto eval = [&](double t) {
      const cdouble lam = seg.kind == Segment::Axis ? cdouble(0.0, t)
                                                    : std::polar(r_ind, t);
      return f(lam);
    };
    size_t start = 0;
    if (first) {
      t_cur = seg.knots[0];
      f_cur = eval(t_cur);
      if (f_cur == cdouble(0.0, 0.0)) {
        throw std::runtime_error("dispersion vanished on the contour");
      }
      arg_cum = 0.0; // column records accumulated phase change
      tr.samples.push_back({t_cur, f_cur, arg_cum});
      first = false;
      start = 1;
    } else {
      // Segment joints share the same contour point; just reset the
      // parameter (Axis +r -> Arc pi/2 -> Axis -r).
      t_cur = seg.knots[0];
      start = 1;
    }
    for (size_t i = start; i < seg.knots.size(); ++i) {
      std::vector<std::pair<double, cdouble>> pending;
      pending.emplace_back(seg.knots[i], eval(seg.knots[i]));
      while (!pending.empty()) {
        const auto [t_next, f_next] = pending.back();
        if (f_next == cdouble(0.0, 0.0)) {
          throw std::runtime_error("dispersion vanished on the contour");
        }
        const double dphi = std::arg(f_next / f_cur);
        if (std::abs(dphi) >= opts.phase_cap) {
          const double scale =
              seg.kind == Segment::Axis ? std::max(1.0, std::abs(t_cur)) : 1.0;
          if (std::abs(t_next - t_cur) <= opts.min_step * scale) {
            throw std::runtime_error(
                "winding count hit the refinement floor: a root sits on or "
                "near the contour (near-marginal mode)");
          }
          const double t_mid = 0.5 * (t_cur + t_next);
          pending.emplace_back(t_mid, eval(t_mid));
          continue;
        }
        total += dphi;
        arg_cum += dphi;
        t_cur = t_next;
        f_cur = f_next;
        pending.pop_back();
        if (seg.kind == Segment::Axis) {
          tr.samples.push_back({t_next, f_next, arg_cum});
        }
        if (++accepted > 4000000) {
          throw std::runtime_error("winding count: excessive refinement");
        }
      }
    }
  }

  tr.unwrapped_phase = std::arg(1.0 + r_top) + total - std::arg(1.0 + r_bot);
  tr.z_raw = 0.5 + tr.unwrapped_phase / (2.0 * M_PI);
  tr.z = static_cast<int>(std::llround(tr.z_raw));
  tr.converged = std::abs(tr.z_raw - tr.z) < 1e-3 && tr.z >= 0;
  if (!tr.converged) {
    tr.message = "winding did not settle on a nonnegative integer";
  }
  return tr;
}

void write_trace_csv(std::ostream& os, const DispersionTrace& trace) {
  os << "lambda_I,ReF,ImF,arg_unwrapped\n";
  for (const TraceSample& s : trace.samples) {
    os << format_g17(s.lambda_im) << ',' << format_g17(s.value.real()) << ','
       << format_g17(s.value.imag()) << ',' << format_g17(s.arg_unwrapped)
       << "\n";
  }
}

int newton_grid_root_count(const std::function<cdouble(cdouble)>& f,
                           double re_max, double im_max, int grid,
                           double dedupe) {
  std::vector<cdouble> roots;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      cdouble lam((i + 0.5) * re_max / grid,
                  -im_max + (j + 0.5) * 2.0 * im_max / grid);
      bool converged = false;
      for (int iter = 0; iter < 80; ++iter) {
        cdouble fv, fp, fm;
        const double h = 1e-7 * (1.0 + std::abs(lam));
        try {
          fv = f(lam);
          fp = f(lam + h);
          fm = f(lam - h);
        } catch (const std::exception&) {
          break;
        }
        const cdouble deriv = (fp - fm) / (2.0 * h);
        if (deriv == cdouble(0.0, 0.0) || !std::isfinite(std::abs(deriv))) {
          break;
        }
        const cdouble step = -fv / deriv;
        if (std::abs(step) < 1e-11 * (1.0 + std::abs(lam))) {
          lam += step;
          converged = true;
          break;
        }
        // Backtrack if the full step does not reduce |f|.
        double sc = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 20; ++halve, sc *= 0.5) {
          const cdouble trial = lam + sc * step;
          cdouble ft;
          try {
            ft = f(trial);
          } catch (const std::exception&) {
            continue;
          }
          if (std::abs(ft) < std::abs(fv)) {
            lam = trial;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      if (!converged) continue;
      if (lam.real() <= 1e-7) continue; // neutral or stable root
      bool duplicate = false;
      for (const cdouble& root : roots) {
        if (std::abs(root - lam) < dedupe) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) roots.push_back(lam);
    }
  }
  return static_cast<int>(roots.size());
}

namespace {

struct CrossingSeed {
  double lambda = 1.0;
  double abs_re = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Positive-axis crossing of Im F closest to the origin in value: at a
// threshold the Hopf pair passes through exactly such a crossing.
CrossingSeed crossing_seed(const DispersionTrace& tr) {
  CrossingSeed best;
  for (size_t i = 0; i + 1 < tr.samples.size(); ++i) {
    const TraceSample& s0 = tr.samples[i];
    const TraceSample& s1 = tr.samples[i + 1];
    if (s0.lambda_im <= 1e-9 || s1.lambda_im <= 1e-9) continue;
    const double im0 = s0.value.imag();
    const double im1 = s1.value.imag();
    if ((im0 < 0.0) == (im1 < 0.0)) continue;
    const double t = im0 / (im0 - im1);
    const double lam = s0.lambda_im + t * (s1.lambda_im - s0.lambda_im);
    const double re =
        s0.value.real() + t * (s1.value.real() - s0.value.real());
    if (std::abs(re) < best.abs_re) {
      best.lambda = lam;
      best.abs_re = std::abs(re);
      best.found = true;
    }
  }
  return best;
}

struct NewtonOut {
  double theta = 0.0;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Damped two-variable Newton on Re F_theta(i lambda) = Im F_theta(i lambda)
// = 0, with central-difference Jacobian. theta_cap keeps iterates on the
// branch (traveling trains need theta < -1).
NewtonOut hopf_newton(const std::function<Dispersion(double)>& make,
                      double theta0, double lambda0,
                      const ThresholdOptions& opts, double theta_cap) {
  const auto value = [&](double th, double l) {
    return make(th).f(cdouble(0.0, l));
  };
  NewtonOut out;
  double th = theta0, l = lambda0;
  cdouble fc;
  try {
    fc = value(th, l);
  } catch (const std::exception&) {
    return out;
  }
  for (int iter = 0; iter < opts.max_newton; ++iter) {
    if (std::abs(fc) < opts.residual_tol) break;
    const double h_th = 1e-6 * (1.0 + std::abs(th));
    const double h_l = 1e-6 * (1.0 + std::abs(l));
    cdouble d_th, d_l;
    try {
      d_th = (value(th + h_th, l) - value(th - h_th, l)) / (2.0 * h_th);
      d_l = (value(th, l + h_l) - value(th, l - h_l)) / (2.0 * h_l);
    } catch (const std::exception&) {
      return out;
    }
    const double det =
        d_th.real() * d_l.imag() - d_l.real() * d_th.imag();
    if (det == 0.0 || !std::isfinite(det)) return out;
    const double step_th =
        -(fc.real() * d_l.imag() - d_l.real() * fc.imag()) / det;
    const double step_l =
        -(d_th.real() * fc.imag() - fc.real() * d_th.imag()) / det;
    bool accepted = false;
    double sc = 1.0;
    for (int halve = 0; halve <= 30; ++halve, sc *= 0.5) {
      const double th_n = th + sc * step_th;
      const double l_n = l + sc * step_l;
      if (!(l_n > 0.0) || th_n >= theta_cap) continue;
      cdouble fn;
      try {
        fn = value(th_n, l_n);
      } catch (const std::exception&) {
        continue;
      }
      if (std::abs(fn) < std::abs(fc)) {
        th = th_n;
        l = l_n;
        fc = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.theta = th;
  out.lambda = l;
  out.residual = std::abs(fc);
  out.ok = out.residual < 1e-10 && l > 0.0;
  return out;
}

} // namespace

ThresholdResult find_threshold(double omega, int k, double tau, int n_pairs,
                               bool traveling, const ThresholdOptions& opts,
                               const double* seed_theta,
                               const double* seed_lambda) {
  ThresholdResult res;
  res.omega = omega;
  res.k = k;
  res.traveling = traveling;

  const auto make = [=](double th) {
    return traveling ? make_traveling_dispersion(omega, k, th, tau, n_pairs)
                     : make_stationary_dispersion(omega, k, th, tau, n_pairs);
  };
  const double theta_cap = traveling ? -1.0 - 1e-10 : -1e-12;

  const auto fill = [&](const NewtonOut& nw) {
    res.theta_star = nw.theta;
    res.lambda_star = nw.lambda;
    res.residual = nw.residual;
    res.converged = nw.ok;
    if (!nw.ok) res.message = "Newton polish did not converge";
  };

  if (seed_theta && seed_lambda) {
    const NewtonOut nw =
        hopf_newton(make, *seed_theta, *seed_lambda, opts, theta_cap);
    if (nw.ok) {
      fill(nw);
      return res;
    }
    // fall through to the cold start
  }

  const auto z_of = [&](double th) {
    WindingOptions w;
    const DispersionTrace t = count_unstable(make(th), w);
    if (!t.converged) {
      throw std::runtime_error("threshold scan: winding count not integral");
    }
    return t.z;
  };

  double th_hi = std::min(opts.theta_start, theta_cap - 1e-9);
  double th_lo = 0.0;
  int z_hi = 0, z_lo = 0;
  bool bracket = false;

  try {
    z_hi = z_of(th_hi);
    if (z_hi > 0) {
      // Already unstable at the start: the threshold sits between here and
      // the branch origin at theta = -1; halve the distance upward.
      th_lo = th_hi;
      z_lo = z_hi;
      double probe = th_hi;
      for (int i = 0; i < 40; ++i) {
        probe = 0.5 * (probe - 1.0);
        if (probe >= theta_cap) break;
        const int z = z_of(probe);
        if (z < z_lo) {
          th_hi = probe;
          z_hi = z;
          bracket = true;
          break;
        }
        th_lo = probe;
        z_lo = z;
      }
      if (!bracket) {
        res.message = "class unstable arbitrarily close to theta = -1";
        return res;
      }
    } else {
      double th = th_hi;
      while (th > opts.theta_min) {
        const double next = th - opts.theta_step;
        const int z = z_of(next);
        if (z > z_hi) {
          th_lo = next;
          z_lo = z;
          th_hi = th;
          bracket = true;
          break;
        }
        th = next;
      }
      if (!bracket) {
        res.message = "no threshold found in [theta_min, theta_start]";
        return res;
      }
    }

    while (th_hi - th_lo > 0.02) {
      const double mid = 0.5 * (th_hi + th_lo);
      if (z_of(mid) > z_hi) {
        th_lo = mid;
      } else {
        th_hi = mid;
      }
    }
  } catch (const std::exception& e) {
    res.message = e.what();
    return res;
  }

  // Seed lambda from the near-zero real-axis crossing on the unstable side.
  double lambda0 = 1.0;
  try {
    WindingOptions w;
    const DispersionTrace t = count_unstable(make(th_lo), w);
    const CrossingSeed cs = crossing_seed(t);
    if (cs.found) lambda0 = cs.lambda;
  } catch (const std::exception&) {
    // keep the default seed
  }

  const NewtonOut nw =
      hopf_newton(make, 0.5 * (th_hi + th_lo), lambda0, opts, theta_cap);
  fill(nw);
  return res;
}

ThresholdTable threshold_scan(const std::vector<double>& tau_grid,
                              const std::vector<double>& omega_grid,
                              const std::vector<int>& k_set, int n_pairs,
                              bool traveling, int jobs,
                              const ThresholdOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const size_t n_tau = tau_grid.size();
  const size_t n_k = k_set.size();
  const size_t n_w = omega_grid.size();
  ThresholdTable table;
  table.rows.resize(n_tau * n_k * n_w);

  // One cell = one (tau, k) pair swept over omega with warm seeding.
  const size_t n_cells = n_tau * n_k;
  std::atomic<size_t> next_cell{0};
  const auto worker = [&]() {
    for (;;) {
      const size_t cell = next_cell.fetch_add(1);
      if (cell >= n_cells) return;
      const size_t it = cell / n_k;
      const size_t ik = cell % n_k;
      const double tau = tau_grid[it];
      const int k = k_set[ik];
      bool have_seed = false;
      double seed_th = 0.0, seed_l = 0.0;
      for (size_t iw = 0; iw < n_w; ++iw) {
        ThresholdResult r;
        try {
          r = find_threshold(omega_grid[iw], k, tau, n_pairs, traveling, opts,
                             have_seed ? &seed_th : nullptr,
                             have_seed ? &seed_l : nullptr);
        } catch (const std::exception& e) {
          r.converged = false;
          r.message = e.what();
        }
        ThresholdRow row;
        row.tau = tau;
        row.omega = omega_grid[iw];
        row.k = k;
        row.n_pairs = n_pairs;
        row.converged = r.converged;
        if (r.converged) {
          row.theta_star = r.theta_star;
          row.lambda_star = r.lambda_star;
          row.residual = r.residual;
          seed_th = r.theta_star;
          seed_l = r.lambda_star;
          have_seed = true;
        } else {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          row.theta_star = nan;
          row.lambda_star = nan;
          row.residual = nan;
          have_seed = false;
        }
        table.rows[(it * n_k + ik) * n_w + iw] = row;
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const ThresholdRow& a, const ThresholdRow& b) {
              if (a.tau != b.tau) return a.tau < b.tau;
              if (a.omega != b.omega) return a.omega < b.omega;
              return a.k < b.k;
            });
  table.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return table;
}

void write_threshold_csv(std::ostream& os, const ThresholdTable& table) {
  os << "tau,omega,k,N,theta_star,lambda_star,residual,converged\n";
  for (const ThresholdRow& r : table.rows) {
    os << format_g17(r.tau) << ',' << format_g17(r.omega) << ',' << r.k << ','
       << r.n_pairs << ',' << format_g17(r.theta_star) << ','
       << format_g17(r.lambda_star) << ',' << format_g17(r.residual) << ','
       << (r.converged ? 1 : 0) << "\n";
  }
}

} // namespace nrms
