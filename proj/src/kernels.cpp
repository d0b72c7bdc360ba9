#include "nrms/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace nrms {

namespace {

constexpr double kDenomFloor = 1e-8;

void check_b(cdouble b) {
  if (b == cdouble(0.0, 0.0)) {
    throw std::invalid_argument("kernel parameter b must be nonzero");
  }
  // Admissible sector: Re(b^2) >= 0 (i.e. |arg b| <= pi/4 modulo sign).
  // A small slack absorbs roundoff for arguments sitting exactly on the
  // boundary, which occurs on the imaginary-axis contour at omega = 0.
  const cdouble b2 = b * b;
  if (b2.real() < -1e-12 * std::norm(b)) {
    throw std::domain_error("kernel parameter b outside |arg b| <= pi/4");
  }
}

// e^{beta x} / (1 - e^{beta}) arranged so the exponentials never overflow:
// for Re beta > 0 multiply through by e^{-beta}.
cdouble stable_term(cdouble beta, double x) {
  if (beta.real() > 0.0) {
    return std::exp(beta * (x - 1.0)) / (std::exp(-beta) - 1.0);
  }
  return std::exp(beta * x) / (1.0 - std::exp(beta));
}

} // namespace

ExpRates exp_rates(double a, cdouble b) {
  check_b(b);
  const cdouble disc = std::sqrt(cdouble(a * a, 0.0) + 4.0 * b * b);
  return ExpRates{(-a + disc) / 2.0, (-a - disc) / 2.0};
}

cdouble g1(double x, double a, cdouble b) {
  if (x < 0.0 || x >= 1.0) {
    throw std::invalid_argument("g1: x must lie in [0,1)");
  }
  const auto [bp, bm] = exp_rates(a, b);
  return (stable_term(bp, x) - stable_term(bm, x)) / (bp - bm);
}

cdouble g2(double x, double a, cdouble b) {
  if (x <= 0.0 || x >= 1.0) {
    throw std::invalid_argument("g2: x must lie in (0,1)");
  }
  const auto [bp, bm] = exp_rates(a, b);
  return -(bm * stable_term(bp, x) - bp * stable_term(bm, x)) / (bp - bm);
}

cdouble g2_right_limit(double a, cdouble b) {
  // The closed form evaluated at x = 0 equals the x -> 0+ limit: it already
  // sits on the high side of the unit jump.
  const auto [bp, bm] = exp_rates(a, b);
  return -(bm * stable_term(bp, 0.0) - bp * stable_term(bm, 0.0)) / (bp - bm);
}

cdouble g2_left_limit(double a, cdouble b) {
  const auto [bp, bm] = exp_rates(a, b);
  // stable_term(beta, 1): e^{beta}/(1-e^{beta}) = 1/(e^{-beta}-1).
  const auto at_one = [](cdouble beta) {
    if (beta.real() > 0.0) {
      return 1.0 / (std::exp(-beta) - 1.0);
    }
    return std::exp(beta) / (1.0 - std::exp(beta));
  };
  return -(bm * at_one(bp) - bp * at_one(bm)) / (bp - bm);
}

namespace {

// Shared pieces of the closed-form spectra. With S = sqrt(a^2 + 4 b^2),
// s = S/4N and d = i pi k/N + a/4N, both eigenvalue formulas reduce to
// ratios of 1 + e^{-2s} + e^{+d-s} + e^{-d-s} style sums, where every
// exponent has nonpositive real part because Re S >= |a| on the admissible
// sector. The denominator is the pole-freeness quantity and is asserted
// to stay above a hard floor.
struct ZetaParts {
  cdouble S;
  cdouble em2s;  // e^{-2s}
  cdouble epdms; // e^{d-s}
  cdouble emdms; // e^{-d-s}
  cdouble denom;
};

ZetaParts zeta_parts(int k, double a, cdouble b, int n_pairs) {
  check_b(b);
  if (n_pairs < 1) {
    throw std::invalid_argument("n_pairs must be positive");
  }
  const double n4 = 4.0 * n_pairs;
  const cdouble S = std::sqrt(cdouble(a * a, 0.0) + 4.0 * b * b);
  const cdouble s = S / n4;
  const cdouble d = cdouble(a / n4, M_PI * k / n_pairs);
  ZetaParts p;
  p.S = S;
  p.em2s = std::exp(-2.0 * s);
  p.epdms = std::exp(d - s);
  p.emdms = std::exp(-d - s);
  p.denom = 1.0 + p.em2s + p.epdms + p.emdms;
  if (std::abs(p.denom) < kDenomFloor) {
    throw std::domain_error("kernel eigenvalue denominator below floor "
                            "(mode too close to a forbidden pole)");
  }
  return p;
}

} // namespace

cdouble zeta1(int k, double a, cdouble b, int n_pairs) {
  const ZetaParts p = zeta_parts(k, a, b, n_pairs);
  return -(1.0 - p.em2s) / (p.S * p.denom);
}

cdouble zeta2(int k, double a, cdouble b, int n_pairs) {
  const ZetaParts p = zeta_parts(k, a, b, n_pairs);
  const cdouble first = (a / 2.0) * (-(1.0 - p.em2s) / (p.S * p.denom));
  const cdouble second = 0.5 * (1.0 + p.em2s + 2.0 * p.epdms) / p.denom;
  return first + second;
}

cdouble zeta1_zero_b_limit(int k, int n_pairs) {
  const double c = std::cos(M_PI * k / n_pairs);
  if (1.0 + c < 1e-12) {
    throw std::domain_error("zeta1 has no finite b -> 0 limit at k = N "
                            "(volume-violating mode)");
  }
  return cdouble(-1.0 / (4.0 * n_pairs * (1.0 + c)), 0.0);
}

cdouble zeta2_zero_b_limit(int k, int n_pairs) {
  const double c = std::cos(M_PI * k / n_pairs);
  if (1.0 + c < 1e-12) {
    throw std::domain_error("zeta2 has no finite b -> 0 limit at k = N "
                            "(volume-violating mode)");
  }
  const cdouble ek = std::exp(cdouble(0.0, M_PI * k / n_pairs));
  return 0.5 * (1.0 + ek) / (1.0 + c);
}

DenseKernelMatrices dense_matrices(double a, cdouble b, int n_pairs) {
  check_b(b);
  const int n = 2 * n_pairs;
  DenseKernelMatrices m;
  m.size = n;
  m.gI.resize(static_cast<size_t>(n) * n);
  m.gII.resize(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x = static_cast<double>(i - j) / n;
      if (x < 0.0) x += 1.0;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      m.at1(i, j) = sign * g1(x, a, b);
      m.at2(i, j) = sign * (x == 0.0 ? g2_right_limit(a, b) : g2(x, a, b));
    }
  }
  return m;
}

std::vector<cdouble> circulant_eigenvector(int k, int n_pairs) {
  std::vector<cdouble> v(2 * n_pairs);
  for (int j = 0; j < 2 * n_pairs; ++j) {
    v[j] = std::exp(cdouble(0.0, M_PI * k * j / n_pairs));
  }
  return v;
}

} // namespace nrms
