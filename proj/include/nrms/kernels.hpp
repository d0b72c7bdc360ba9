#ifndef NRMS_KERNELS_HPP
#define NRMS_KERNELS_HPP

// Periodic Green's kernels for the quasi-steady bulk field between fronts and
// the closed-form spectra of the alternating-sign circulant matrices built
// from them.
//
// Both kernels solve  G'' + a G' - b^2 G = 0  on (0,1) with 1-periodic
// boundary conditions.  G_I carries a unit jump in the derivative at x = 0
// (continuous value); G_II carries a unit jump in the value (continuous
// derivative).  The alternating circulant (G)_{mn} = (-1)^{m+n} G(x_m - x_n)
// over the uniform front set x_n = n/2N is diagonalized by the vectors
// g_k = (e^{i pi k j / N})_{j=0..2N-1}; zeta1/zeta2 return the corresponding
// eigenvalues without ever forming the matrix.
//
// All evaluations are safe for large |b| (exponentials are arranged so every
// exponent has nonpositive real part) under the admissibility condition
// Re(b^2) >= 0, b != 0, which keeps the shared denominator away from zero.

#include <complex>
#include <vector>

namespace nrms {

using cdouble = std::complex<double>;

// Characteristic rates of G'' + a G' - b^2 G = 0, i.e. the two roots of
// r^2 + a r - b^2 = 0 (principal square root; beta_plus has the larger real
// part, and equals b when a = 0 and b is real positive).
struct ExpRates {
  cdouble beta_plus;
  cdouble beta_minus;
};

ExpRates exp_rates(double a, cdouble b);

// Kernel with unit derivative jump at the base point. x must lie in [0,1).
cdouble g1(double x, double a, cdouble b);

// Kernel with unit value jump at the base point. x must lie in (0,1); the
// one-sided limits at the jump are exposed separately below.
cdouble g2(double x, double a, cdouble b);
cdouble g2_right_limit(double a, cdouble b); // x -> 0+
cdouble g2_left_limit(double a, cdouble b);  // x -> 1-

// Eigenvalues of the alternating circulants for mode index k (any integer;
// the spectrum is 2N-periodic in k). n_pairs is N, the number of front pairs.
cdouble zeta1(int k, double a, cdouble b, int n_pairs);
cdouble zeta2(int k, double a, cdouble b, int n_pairs);

// omega -> 0+ limits of zeta1/zeta2 at a = 0 (finite for k != N mod 2N; the
// k = N mode violates the volume constraint and has no finite limit).
cdouble zeta1_zero_b_limit(int k, int n_pairs);
cdouble zeta2_zero_b_limit(int k, int n_pairs);

// Dense 2N x 2N realizations, used by tests as an independent route to the
// spectra. Row-major, indices m,n = 1..2N mapped to 0-based storage. The
// diagonal of gII takes the x -> 0+ limit of the kernel, which already
// carries the unit jump, so the matrix spectrum matches zeta2 directly.
struct DenseKernelMatrices {
  int size = 0;
  std::vector<cdouble> gI;
  std::vector<cdouble> gII;
  cdouble& at1(int m, int n) { return gI[m * size + n]; }
  cdouble& at2(int m, int n) { return gII[m * size + n]; }
  cdouble at1(int m, int n) const { return gI[m * size + n]; }
  cdouble at2(int m, int n) const { return gII[m * size + n]; }
};

DenseKernelMatrices dense_matrices(double a, cdouble b, int n_pairs);

// g_k, the shared eigenvector family of both circulants.
std::vector<cdouble> circulant_eigenvector(int k, int n_pairs);

} // namespace nrms

#endif
