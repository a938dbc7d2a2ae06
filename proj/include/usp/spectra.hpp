#pragma once

#include <utility>
#include <vector>

#include "usp/banded.hpp"

namespace usp {

struct SpectralInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool reciprocal = false;  // interval describes eigenvalues of the inverse operator
};

enum class Parity { Even, Odd };

struct CharCoeffs {
  // Coefficients in decreasing power of lambda; all positive for the
  // second-order Dirichlet case. When the raw values would overflow, they are
  // stored scaled by exp(-log_scale) (ratios, which is all the root bounds
  // use, are unaffected).
  std::vector<double> values;
  Parity parity = Parity::Even;
  int n = 0;
  double log_scale = 0.0;
};

// Characteristic coefficients (a_k, b_k) of the second-order Dirichlet
// pencil at even truncation n.
std::pair<CharCoeffs, CharCoeffs> char_coeffs_dirichlet2(int n);

// Magnitude bounds (lower, upper) on the roots of the monic polynomial with
// the given coefficients, assuming all roots real: upper from sqrt(c1^2-2c2),
// lower from the reversed polynomial.
std::pair<double, double> newton_bound(const CharCoeffs& c);

// Closed-form enclosure for the second-order Dirichlet spectrum at truncation
// parameter n (an interval of negative numbers [lo, hi]).
SpectralInterval dirichlet2_bounds(int n);

SpectralInterval reciprocal_interval(const SpectralInterval& s);

// Interval for u'' - rho u given the interval of u'' and the range of rho.
SpectralInterval shifted_interval(const SpectralInterval& s, std::pair<double, double> rho_range);

// Estimates the extreme eigenvalues of A2^{-1} A1 by power and inverse power
// iteration with banded solves, inflated outward by 1.1 on each end.
SpectralInterval empirical_interval(const BandedMatrix& A1, const BandedMatrix& A2, int iters);

// Enclosure of the pencil det(A1 - lambda A2) in modulus: extreme moduli of
// P = A2^{-1} A1 and its inverse estimated by power iteration with the growth
// rate geometrically averaged over a trailing window, inflated/deflated by
// 1.5 on each end. The magnitude estimate settles even when the truncated
// pencil carries complex conjugate pairs at the large end, where Rayleigh
// quotients oscillate and trace-based root bounds break down. The sign of the
// returned interval follows the trace of P.
SpectralInterval modulus_interval(const BandedMatrix& A1, const BandedMatrix& A2);

}  // namespace usp
