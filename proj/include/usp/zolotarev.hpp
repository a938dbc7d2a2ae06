#pragma once

#include <array>
#include <vector>

#include "usp/errors.hpp"

namespace usp {

enum class ShiftOrder { Ascending, Descending };

struct ShiftSchedule {
  std::vector<double> p;  // shifts in the (A1 - p A2) half-steps
  std::vector<double> q;  // shifts in the (B1 + q B2) half-steps
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double gamma = 0.0, alpha = 0.0, beta = 0.0;
  ShiftOrder order = ShiftOrder::Ascending;
  int k() const { return int(p.size()); }
};

// Cross-ratio of the two disjoint intervals [a,b] and [c,d].
double cross_ratio_gamma(double a, double b, double c, double d);

// alpha = -1 + 2 gamma + 2 sqrt(gamma^2 - gamma); beta = sqrt(1 - 1/alpha^2).
std::array<double, 2> elliptic_params(double gamma);

// Complete elliptic integral of the first kind with modulus beta, via the AGM.
double ellip_K(double beta);
// Same, parametrized by the complementary modulus (avoids cancellation when
// beta is close to 1).
double ellip_K_complement(double beta_prime);

// Jacobi dn(u, beta) by the descending Landen / AGM recursion.
double jacobi_dn(double u, double beta);

// Moebius map determined by {-alpha, -1, 1, alpha} -> {a, b, c, d}; the
// fourth point is implied by cross-ratio equality and verified.
struct MobiusMap {
  double m11, m12, m21, m22;
  double operator()(double z) const { return (m11 * z + m12) / (m21 * z + m22); }
};
MobiusMap mobius_map(double alpha, double a, double b, double c, double d);

// k = ceil(log(16 gamma) log(4/eps) / pi^2), floored at 1, capped at 300.
int shift_count(double gamma, double eps);

ShiftSchedule shifts(double a, double b, double c, double d, int k,
                     ShiftOrder order = ShiftOrder::Ascending);

// Upper bound 4 exp(-k pi^2 / log(16 gamma)) on the achieved error factor.
double zolotarev_bound(double gamma, int k);

}  // namespace usp
