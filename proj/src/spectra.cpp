#include "usp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usp {

namespace {

// log of 2^{2k} Gamma(np + 2k) (2k+1)! / (Gamma(4k+4) (nm - 2k)!)
double log_char_coeff(int k, double np_arg, double nm_arg) {
  return 2.0 * k * std::log(2.0) + std::lgamma(np_arg) + std::lgamma(2.0 * k + 2.0) -
         std::lgamma(4.0 * k + 4.0) - std::lgamma(nm_arg);
}

CharCoeffs from_logs(std::vector<double> logs, Parity parity, int n) {
  CharCoeffs c;
  c.parity = parity;
  c.n = n;
  double mx = *std::max_element(logs.begin(), logs.end());
  // Keep raw values when representable, otherwise scale down uniformly.
  c.log_scale = (mx > 650.0) ? mx - 650.0 : 0.0;
  if (mx - c.log_scale > 700.0)
    throw std::overflow_error("characteristic coefficients overflow at n = " + std::to_string(n));
  c.values.reserve(logs.size());
  for (double lv : logs) c.values.push_back(std::exp(lv - c.log_scale));
  return c;
}

}  // namespace

std::pair<CharCoeffs, CharCoeffs> char_coeffs_dirichlet2(int n) {
  if (n < 4 || n % 2 != 0)
    throw InvalidArgumentError("char_coeffs_dirichlet2: n must be even and >= 4");
  std::vector<double> la, lb;
  for (int k = 0; k <= n / 2 - 1; ++k) la.push_back(log_char_coeff(k, n + 2.0 * k + 3.0, n - 2.0 * k));
  for (int k = 0; k <= n / 2; ++k) lb.push_back(log_char_coeff(k, n + 2.0 * k + 4.0, n - 2.0 * k + 1.0));
  return {from_logs(std::move(la), Parity::Odd, n), from_logs(std::move(lb), Parity::Even, n)};
}

std::pair<double, double> newton_bound(const CharCoeffs& c) {
  const auto& v = c.values;
  if (v.size() < 3) throw InvalidArgumentError("newton_bound: need at least 3 coefficients");
  const std::size_t m = v.size() - 1;
  double c1 = v[1] / v[0], c2 = v[2] / v[0];
  double disc_hi = c1 * c1 - 2.0 * c2;
  double r1 = v[m - 1] / v[m], r2 = v[m - 2] / v[m];
  double disc_lo = r1 * r1 - 2.0 * r2;
  if (disc_hi < 0.0 || disc_lo < 0.0)
    throw ComplexSpectrumError("newton_bound: negative discriminant, roots not all real");
  return {1.0 / std::sqrt(disc_lo), std::sqrt(disc_hi)};
}

SpectralInterval dirichlet2_bounds(int n) {
  if (n < 4) throw InvalidArgumentError("dirichlet2_bounds: n must be >= 4");
  const double nn = n;
  double lo = -std::sqrt(nn * (nn - 1) * (nn + 5) * (nn + 4) *
                         (29 * nn * nn * nn * nn + 232 * nn * nn * nn + 2279 * nn * nn +
                          7260 * nn - 17640) /
                         121275.0);
  double hi = -std::sqrt(48.0 * (nn * nn * nn + 2 * nn * nn + nn) /
                         (8 * nn * nn * nn + 16 * nn * nn + 8 * nn - 3));
  return {lo, hi, false};
}

SpectralInterval reciprocal_interval(const SpectralInterval& s) {
  if (s.lo <= 0.0 && s.hi >= 0.0)
    throw IndefiniteOperatorError("reciprocal_interval: interval contains zero");
  return {1.0 / s.hi, 1.0 / s.lo, !s.reciprocal};
}

SpectralInterval shifted_interval(const SpectralInterval& s, std::pair<double, double> rho_range) {
  if (rho_range.first > rho_range.second)
    throw InvalidArgumentError("shifted_interval: invalid rho range");
  SpectralInterval r{s.lo - rho_range.second, s.hi - rho_range.first, s.reciprocal};
  if (r.lo <= 0.0 && r.hi >= 0.0)
    throw IndefiniteOperatorError("shifted_interval: shifted spectrum crosses zero");
  return r;
}

namespace {

// Largest-magnitude eigenvalue of M^{-1}_den * M_num via power iteration,
// returned as a signed Rayleigh estimate.
double power_extreme(const BandedMatrix& num, const BandedLU& den_lu, int n, int iters,
                     double tol) {
  Eigen::MatrixXd x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
  x /= x.norm();
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd y = den_lu.solve(num.apply(x));
    double lambda = (x.transpose() * y)(0, 0);
    double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0)
      throw ConvergenceError("empirical spectrum estimate diverged");
    x = y / ny;
    if (std::abs(lambda - prev) <= tol * std::abs(lambda)) return lambda;
    prev = lambda;
  }
  // One more Rayleigh quotient; accept if reasonably settled.
  Eigen::MatrixXd y = den_lu.solve(num.apply(x));
  double lambda = (x.transpose() * y)(0, 0);
  if (std::abs(lambda - prev) > 100 * tol * std::abs(lambda))
    throw ConvergenceError("power iteration did not converge; increase the iteration budget");
  return lambda;
}

}  // namespace

SpectralInterval empirical_interval(const BandedMatrix& A1, const BandedMatrix& A2, int iters) {
  if (A1.rows() != A1.cols() || A2.rows() != A2.cols() || A1.rows() != A2.rows())
    throw DimensionError("empirical_interval: square matrices of equal size required");
  const int n = A1.rows();
  const double tol = 1e-8;
  BandedLU lu2(A2);
  double big = power_extreme(A1, lu2, n, iters, tol);  // extreme of A2^{-1} A1
  BandedLU lu1(A1);
  double inv = power_extreme(A2, lu1, n, iters, tol);  // extreme of A1^{-1} A2
  if (inv == 0.0) throw ConvergenceError("empirical_interval: singular estimate");
  double small = 1.0 / inv;
  double lo = std::min(big, small), hi = std::max(big, small);
  // Inflate outward by 1.1 on each end (magnitudes grow away from zero for
  // definite spectra).
  if (lo > 0.0) {
    lo /= 1.1;
    hi *= 1.1;
  } else if (hi < 0.0) {
    lo *= 1.1;
    hi /= 1.1;
  } else {
    lo *= 1.1;
    hi *= 1.1;
  }
  return {lo, hi, false};
}

namespace {

// Spectral radius of den^{-1} num by power iteration with the growth rate
// geometrically averaged over a trailing window. Unlike a Rayleigh quotient,
// the magnitude estimate settles even when the dominant eigenvalue is a
// complex conjugate pair (the growth oscillates periodically; its log-average
// converges to log of the modulus).
double radius_estimate(const BandedMatrix& num, const BandedLU& den_lu, int n, int iters,
                       int window) {
  Eigen::MatrixXd x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
  x /= x.norm();
  double log_growth = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd y = den_lu.solve(num.apply(x));
    double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0)
      throw ConvergenceError("radius_estimate: power iteration degenerated");
    if (it >= iters - window) log_growth += std::log(ny);
    x = y / ny;
  }
  return std::exp(log_growth / window);
}

}  // namespace

SpectralInterval modulus_interval(const BandedMatrix& A1, const BandedMatrix& A2) {
  if (A1.rows() != A1.cols() || A2.rows() != A2.cols() || A1.rows() != A2.rows())
    throw DimensionError("modulus_interval: square matrices of equal size required");
  const int n = A1.rows();
  BandedLU lu2(A2), lu1(A1);
  double hi_mag = radius_estimate(A1, lu2, n, 300, 100) * 1.5;
  double inv_lo = radius_estimate(A2, lu1, n, 300, 100) * 1.5;
  if (hi_mag == 0.0 || inv_lo == 0.0)
    throw ConvergenceError("modulus_interval: singular pencil estimate");
  double lo_mag = 1.0 / inv_lo;
  // Sign of the (assumed single-signed real-part) spectrum from the trace.
  Eigen::MatrixXd P = lu2.solve(A1.dense());
  if (P.trace() > 0.0) return {lo_mag, hi_mag, false};
  return {-hi_mag, -lo_mag, false};
}

}  // namespace usp
