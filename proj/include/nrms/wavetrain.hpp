#ifndef NRMS_WAVETRAIN_HPP
#define NRMS_WAVETRAIN_HPP

// Wave-train solutions of the sharp-interface two-species model on the
// periodic strip: 2N equally spaced flat fronts at x_n = n/2N traveling at a
// selected speed c0, together with the piecewise-exponential chemical field
// v0 and the piecewise-linear flux potential w0 they drag along.
//
// The speed is selected by the scalar equation xi + theta*tanh(xi) = 0 with
// xi = tau*c0/4N: the rest state xi = 0 is the only solution for theta >= -1,
// and a unique positive root appears for theta < -1 (the positive root is
// returned; the mirror-image train travels at -c0).

#include <iosfwd>
#include <vector>

namespace nrms {

// Nondimensional model parameters on the domain [0,1] x [0,rho].
struct ModelParams {
  double epsilon = 0.01;
  double tau = 1.0;
  double theta = -2.0;
  double rho = 1.0;
  void validate() const;
};

// Dimensional inputs; the reduction only sees the combinations below.
struct DimensionalParams {
  double kappa = 1e-4;   // gradient-energy coefficient
  double beta = 1.0;     // well depth scale
  double L = 1.0;        // pattern wavelength
  double H = 1.0;        // strip height
  double D12 = -0.15;    // cross-diffusion, u <- v
  double D21 = 0.15;     // cross-diffusion, v <- u
  double D22 = 0.1;      // self-diffusion of v

  double theta() const { return D12 * D21 / (D22 * D22); }
  double epsilon() const;
  double tau() const;
  double rho() const { return H / L; }
};

struct DimensionalSpeeds {
  double c_sharp = 0.0;    // interface-limit speed, 4*D22*xi/L
  double c_bm = 0.0;       // small-amplitude phase speed from the onset analysis
  bool c_bm_valid = false; // false when the radicand is negative
};

// Positive root of xi + theta*tanh(xi) = 0 (0 when theta >= -1).
// The residual at the returned root is below 1e-13.
double solve_xi(double theta);

// Selected train speed c0 = 4*N*xi/tau.
double wave_speed(double theta, double tau, int n_pairs);

// Signed heteroclinic connecting the two wells, Q(eta) = tanh(eta/sqrt(2)),
// and the associated surface tension gamma = (1/2) Int Q'^2 = sqrt(2)/3.
double heteroclinic(double eta);
double surface_tension();

class WaveTrainProfile {
public:
  WaveTrainProfile(double theta, double tau, int n_pairs);

  int n_pairs() const { return n_; }
  double theta() const { return theta_; }
  double tau() const { return tau_; }
  double c0() const { return c0_; }
  double xi() const { return xi_; }
  // Front n = 1..2N sits at n/2N.
  double front(int n) const { return static_cast<double>(n) / (2 * n_); }

  // Field evaluations; x is reduced modulo 1. Both fields vanish identically
  // when c0 = 0.
  double v0(double x) const;
  double w0(double x) const;
  double v0_deriv(double x) const;
  double v0_deriv2(double x) const;
  double w0_deriv(double x) const;

  // One-sided values at front n (n = 1..2N; n = 2N probes the periodic seam).
  double v0_left(int n) const;
  double v0_right(int n) const;
  double w0_left(int n) const;
  double w0_right(int n) const;
  double v0_deriv_left(int n) const;
  double v0_deriv_right(int n) const;
  double w0_deriv_left(int n) const;
  double w0_deriv_right(int n) const;

private:
  int interval_index(double x) const; // j with x in [x_{j-1}, x_j), 1-based
  double v0_on(int j, double x) const;
  double v0_deriv_on(int j, double x) const;
  double w0_on(int j, double x) const;
  double w0_slope(int j) const;

  int n_;
  double theta_, tau_, xi_, c0_;
  double amp_; // A = -tanh(xi)/tau; v0(x_n) = (-1)^n A
};

WaveTrainProfile build_profile(const ModelParams& params, int n_pairs);

DimensionalSpeeds dimensional_speeds(const DimensionalParams& dp);

// Smooth two-phase fields assembled from the train: u is the heteroclinic of
// the periodic signed distance to the front set (positive on the u = +1
// plateaus [x_{2n}, x_{2n+1}]), and v adds the outer field v0 to the inner
// correction -u/tau.
class CompositeFields {
public:
  CompositeFields(const WaveTrainProfile& profile, double epsilon);

  // Periodic signed distance to the nearest front.
  double signed_distance(double x) const;
  double u(double x) const;
  double v(double x) const;

  const WaveTrainProfile& profile() const { return profile_; }
  double epsilon() const { return eps_; }
  // Set when the interface width is large enough that neighboring tanh tails
  // overlap above ~1e-8 at the plateau midpoints.
  bool overlap_warning() const { return overlap_warning_; }

private:
  WaveTrainProfile profile_;
  double eps_;
  bool overlap_warning_;
};

CompositeFields composite_fields(const WaveTrainProfile& profile,
                                 const ModelParams& params);

// CSV export: columns x, v0, w0, u_eps, v_eps on a uniform grid of the given
// size, preceded by '# key=value' comment lines carrying theta, tau, N,
// epsilon, c0 and xi.
void write_profile_csv(std::ostream& os, const CompositeFields& fields,
                       int samples);

} // namespace nrms

#endif
