#include "nrms/wavetrain.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nrms/io.hpp"

namespace nrms {

void ModelParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

double DimensionalParams::epsilon() const {
  return std::sqrt(kappa / beta) / L;
}

double DimensionalParams::tau() const {
  return std::sqrt(kappa * beta) / (D22 * L);
}

double solve_xi(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("theta must be finite");
  }
  if (theta >= -1.0) {
    return 0.0;
  }
  const auto h = [theta](double x) { return x + theta * std::tanh(x); };
  // h(0+) < 0 because h'(0) = 1 + theta < 0, and h(-theta) > 0; bisect, then
  // polish with Newton. The root is simple: h' = 1 + theta*sech^2 grows
  // through 0 strictly before the root.
  double lo = 0.0, hi = -theta;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double t = std::tanh(x);
    const double hp = 1.0 + theta * (1.0 - t * t);
    if (hp == 0.0) break;
    x -= (x + theta * t) / hp;
  }
  return x;
}

double wave_speed(double theta, double tau, int n_pairs) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be positive");
  return 4.0 * n_pairs * solve_xi(theta) / tau;
}

double heteroclinic(double eta) { return std::tanh(eta / std::sqrt(2.0)); }

double surface_tension() { return std::sqrt(2.0) / 3.0; }

WaveTrainProfile::WaveTrainProfile(double theta, double tau, int n_pairs)
    : n_(n_pairs), theta_(theta), tau_(tau) {
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  xi_ = solve_xi(theta);
  c0_ = 4.0 * n_ * xi_ / tau_;
  amp_ = -std::tanh(xi_) / tau_;
}

int WaveTrainProfile::interval_index(double x) const {
  int j = static_cast<int>(std::floor(x * 2.0 * n_)) + 1;
  if (j < 1) j = 1;
  if (j > 2 * n_) j = 2 * n_;
  return j;
}

// v0 on [x_{j-1}, x_j) is a single exponential anchored at the right front:
// (2/tau) (-1)^{j+1} (1/2 - e^{-tau c0 (x - x_j)} / (1 + e^{2 xi})).
double WaveTrainProfile::v0_on(int j, double x) const {
  const double sgn = (j % 2 == 0) ? -1.0 : 1.0;
  const double e = std::exp(-tau_ * c0_ * (x - front(j)));
  return (2.0 / tau_) * sgn * (0.5 - e / (1.0 + std::exp(2.0 * xi_)));
}

double WaveTrainProfile::v0_deriv_on(int j, double x) const {
  const double sgn = (j % 2 == 0) ? -1.0 : 1.0;
  const double e = std::exp(-tau_ * c0_ * (x - front(j)));
  return 2.0 * c0_ * sgn * e / (1.0 + std::exp(2.0 * xi_));
}

double WaveTrainProfile::w0_slope(int j) const {
  const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
  return sgn * 4.0 * n_ * theta_ * amp_;
}

double WaveTrainProfile::w0_on(int j, double x) const {
  const double left_sgn = ((j - 1) % 2 == 0) ? 1.0 : -1.0;
  const double w_left = theta_ * left_sgn * amp_;
  return w_left + w0_slope(j) * (x - front(j - 1));
}

namespace {
double reduce_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0; // guards x = -1e-18 style inputs
  return r;
}
} // namespace

double WaveTrainProfile::v0(double x) const {
  if (c0_ == 0.0) return 0.0;
  const double r = reduce_unit(x);
  return v0_on(interval_index(r), r);
}

double WaveTrainProfile::w0(double x) const {
  if (c0_ == 0.0) return 0.0;
  const double r = reduce_unit(x);
  return w0_on(interval_index(r), r);
}

double WaveTrainProfile::v0_deriv(double x) const {
  if (c0_ == 0.0) return 0.0;
  const double r = reduce_unit(x);
  return v0_deriv_on(interval_index(r), r);
}

double WaveTrainProfile::v0_deriv2(double x) const {
  // Interior relation: v0'' = -tau c0 v0'.
  return -tau_ * c0_ * v0_deriv(x);
}

double WaveTrainProfile::w0_deriv(double x) const {
  if (c0_ == 0.0) return 0.0;
  const double r = reduce_unit(x);
  return w0_slope(interval_index(r));
}

double WaveTrainProfile::v0_left(int n) const {
  if (c0_ == 0.0) return 0.0;
  return v0_on(n, front(n));
}

double WaveTrainProfile::v0_right(int n) const {
  if (c0_ == 0.0) return 0.0;
  // Interval n+1 evaluated at its left endpoint; the periodic image of the
  // seam front 2N is interval 1 at x = 0.
  if (n == 2 * n_) return v0_on(1, 0.0);
  return v0_on(n + 1, front(n));
}

double WaveTrainProfile::w0_left(int n) const {
  if (c0_ == 0.0) return 0.0;
  return w0_on(n, front(n));
}

double WaveTrainProfile::w0_right(int n) const {
  if (c0_ == 0.0) return 0.0;
  if (n == 2 * n_) return w0_on(1, 0.0);
  return w0_on(n + 1, front(n));
}

double WaveTrainProfile::v0_deriv_left(int n) const {
  if (c0_ == 0.0) return 0.0;
  return v0_deriv_on(n, front(n));
}

double WaveTrainProfile::v0_deriv_right(int n) const {
  if (c0_ == 0.0) return 0.0;
  if (n == 2 * n_) return v0_deriv_on(1, 0.0);
  return v0_deriv_on(n + 1, front(n));
}

double WaveTrainProfile::w0_deriv_left(int n) const {
  if (c0_ == 0.0) return 0.0;
  return w0_slope(n);
}

double WaveTrainProfile::w0_deriv_right(int n) const {
  if (c0_ == 0.0) return 0.0;
  return w0_slope(n == 2 * n_ ? 1 : n + 1);
}

WaveTrainProfile build_profile(const ModelParams& params, int n_pairs) {
  params.validate();
  return WaveTrainProfile(params.theta, params.tau, n_pairs);
}

DimensionalSpeeds dimensional_speeds(const DimensionalParams& dp) {
  if (!(dp.L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!(dp.D22 > 0.0)) throw std::invalid_argument("D22 must be positive");
  DimensionalSpeeds out;
  out.c_sharp = 4.0 * dp.D22 / dp.L * solve_xi(dp.theta());
  const double p = std::abs(dp.D12 * dp.D21);
  const double radicand = 1.0 - dp.D22 * dp.D22 / p;
  if (radicand >= 0.0 && p > 0.0) {
    out.c_bm = 2.0 * M_PI * std::sqrt(p) / dp.L * std::sqrt(radicand);
    out.c_bm_valid = true;
  } else {
    out.c_bm = std::numeric_limits<double>::quiet_NaN();
    out.c_bm_valid = false;
  }
  return out;
}

CompositeFields::CompositeFields(const WaveTrainProfile& profile,
                                 double epsilon)
    : profile_(profile), eps_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  // tanh tails fall below ~1e-8 within |log(1e-8)|*eps of a front; warn when
  // that reach exceeds half the front gap 1/(4N).
  overlap_warning_ =
      eps_ * std::log(1e8) > 1.0 / (4.0 * profile_.n_pairs());
}

double CompositeFields::signed_distance(double x) const {
  const double r = x - std::floor(x);
  const double y = r * 2.0 * profile_.n_pairs();
  const double d = std::abs(y - std::round(y)) / (2.0 * profile_.n_pairs());
  // Plateau intervals [x_{2n}, x_{2n+1}) carry u = +1; they are the intervals
  // whose 0-based index is even.
  const int idx = static_cast<int>(std::floor(y));
  const bool inside = (idx % 2 == 0);
  return inside ? d : -d;
}

double CompositeFields::u(double x) const {
  return heteroclinic(signed_distance(x) / eps_);
}

double CompositeFields::v(double x) const {
  return profile_.v0(x) - u(x) / profile_.tau();
}

CompositeFields composite_fields(const WaveTrainProfile& profile,
                                 const ModelParams& params) {
  params.validate();
  return CompositeFields(profile, params.epsilon);
}

void write_profile_csv(std::ostream& os, const CompositeFields& fields,
                       int samples) {
  if (samples < 2) throw std::invalid_argument("samples must be at least 2");
  const WaveTrainProfile& p = fields.profile();
  os << "# theta=" << format_g17(p.theta()) << "\n";
  os << "# tau=" << format_g17(p.tau()) << "\n";
  os << "# N=" << p.n_pairs() << "\n";
  os << "# epsilon=" << format_g17(fields.epsilon()) << "\n";
  os << "# c0=" << format_g17(p.c0()) << "\n";
  os << "# xi=" << format_g17(p.xi()) << "\n";
  os << "x,v0,w0,u_eps,v_eps\n";
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    os << format_g17(x) << ',' << format_g17(p.v0(x)) << ','
       << format_g17(p.w0(x)) << ',' << format_g17(fields.u(x)) << ','
       << format_g17(fields.v(x)) << "\n";
  }
}

} // namespace nrms
