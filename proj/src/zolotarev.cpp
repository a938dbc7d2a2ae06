#include "usp/zolotarev.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

namespace usp {

double cross_ratio_gamma(double a, double b, double c, double d) {
  if (!(a <= b) || !(c <= d)) throw InvalidArgumentError("cross_ratio_gamma: malformed intervals");
  if (std::max(a, c) <= std::min(b, d))
    throw InvalidArgumentError("cross_ratio_gamma: intervals overlap");
  double den = std::abs(c - b) * std::abs(d - a);
  if (den == 0.0) throw InvalidArgumentError("cross_ratio_gamma: touching intervals");
  return std::abs(c - a) * std::abs(d - b) / den;
}

std::array<double, 2> elliptic_params(double gamma) {
  if (gamma <= 1.0) throw InvalidArgumentError("elliptic_params: gamma must exceed 1");
  double alpha = -1.0 + 2.0 * gamma + 2.0 * std::sqrt(gamma * gamma - gamma);
  double beta = std::sqrt((1.0 - 1.0 / alpha) * (1.0 + 1.0 / alpha));
  return {alpha, beta};
}

double ellip_K_complement(double beta_prime) {
  if (beta_prime <= 0.0 || beta_prime > 1.0)
    throw InvalidArgumentError("elliptic integral: complementary modulus out of range");
  double a = 1.0, b = beta_prime;
  for (int it = 0; it < 64; ++it) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    if (std::abs(a - b) <= 1e-15 * a) break;
    a = an;
    b = bn;
  }
  return std::numbers::pi / (2.0 * a);
}

double ellip_K(double beta) {
  if (beta < 0.0 || beta >= 1.0) throw InvalidArgumentError("ellip_K: modulus must be in [0,1)");
  return ellip_K_complement(std::sqrt((1.0 - beta) * (1.0 + beta)));
}

namespace {

// dn(u, beta) parametrized by the complementary modulus bp = sqrt(1 - beta^2).
double dn_complement(double u, double bp) {
  if (bp == 1.0) return 1.0;  // beta = 0
  if (u == 0.0) return 1.0;
  const double one_minus_m = bp * bp;  // 1 - beta^2
  if (one_minus_m < 2e-10) {
    // beta ~ 1: expansion around the hyperbolic limit.
    double sech = 1.0 / std::cosh(u);
    double tanh_u = std::tanh(u);
    return sech + 0.25 * one_minus_m * (std::sinh(u) * std::cosh(u) + u) * tanh_u * sech;
  }
  // AGM with the descending Gauss transformation (the classical sn/cn/dn
  // recurrence); unlike the amplitude descent it stays well-defined at the
  // quarter period u = K.
  double em[32], en[32];
  double a = 1.0, emc = one_minus_m, c = 1.0;
  int l = 0;
  for (int i = 0; i < 32; ++i) {
    l = i;
    em[i] = a;
    emc = std::sqrt(emc);
    en[i] = emc;
    c = 0.5 * (a + emc);
    if (std::abs(a - emc) <= 1e-15 * a) break;
    emc *= a;
    a = c;
  }
  double uu = u * c;
  double sn = std::sin(uu), cn = std::cos(uu), dn = 1.0;
  if (sn != 0.0) {
    double t = cn / sn;
    c *= t;
    for (int i = l; i >= 0; --i) {
      double bb = em[i];
      t *= c;
      c *= dn;
      dn = (en[i] + t) / (bb + t);
      t = c / bb;
    }
  }
  return dn;
}

}  // namespace

double jacobi_dn(double u, double beta) {
  if (beta < 0.0 || beta >= 1.0) throw InvalidArgumentError("jacobi_dn: modulus must be in [0,1)");
  if (beta == 0.0) return 1.0;
  return dn_complement(u, std::sqrt((1.0 - beta) * (1.0 + beta)));
}

namespace {

struct Mob2x2 {
  double a, b, c, d;  // z -> (a z + b) / (c z + d)
};

// Cross-ratio map sending (z1, z2, z3) to (0, 1, infinity).
Mob2x2 three_point(double z1, double z2, double z3) {
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

MobiusMap mobius_map(double alpha, double a, double b, double c, double d) {
  if (a == b || b == c || a == c)
    throw InvalidArgumentError("mobius_map: interval endpoints must be distinct");
  Mob2x2 M1 = three_point(-alpha, -1.0, 1.0);
  Mob2x2 M2 = three_point(a, b, c);
  // M = M2^{-1} * M1 (adjugate inverse; scale is irrelevant).
  MobiusMap M{M2.d * M1.a - M2.b * M1.c, M2.d * M1.b - M2.b * M1.d,
              -M2.c * M1.a + M2.a * M1.c, -M2.c * M1.b + M2.a * M1.d};
  double scale = std::max({std::abs(M.m11), std::abs(M.m12), std::abs(M.m21), std::abs(M.m22)});
  M.m11 /= scale;
  M.m12 /= scale;
  M.m21 /= scale;
  M.m22 /= scale;
  double d4 = M(alpha);
  if (std::abs(d4 - d) > 1e-10 * std::max(1.0, std::abs(d)))
    throw InvalidArgumentError("mobius_map: fourth point mismatch (inconsistent parameters)");
  return M;
}

int shift_count(double gamma, double eps) {
  if (gamma <= 1.0) throw InvalidArgumentError("shift_count: gamma must exceed 1");
  if (eps <= 0.0 || eps >= 4.0) return 1;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double kf = std::ceil(std::log(16.0 * gamma) * std::log(4.0 / eps) / pi2);
  int k = std::max(1, int(kf));
  if (k > 300) {
    std::cerr << "warning: shift schedule capped at 300 (requested " << k << ")\n";
    k = 300;
  }
  return k;
}

ShiftSchedule shifts(double a, double b, double c, double d, int k, ShiftOrder order) {
  if (k < 1) throw InvalidArgumentError("shifts: need k >= 1");
  ShiftSchedule s;
  s.a = a;
  s.b = b;
  s.c = c;
  s.d = d;
  s.order = order;
  s.gamma = cross_ratio_gamma(a, b, c, d);
  auto [alpha, beta] = elliptic_params(s.gamma);
  s.alpha = alpha;
  s.beta = beta;
  const double K = ellip_K_complement(1.0 / alpha);  // beta' = 1/alpha exactly
  MobiusMap M = mobius_map(alpha, a, b, c, d);
  s.p.resize(k);
  s.q.resize(k);
  for (int j = 1; j <= k; ++j) {
    double dn = dn_complement((2.0 * j - 1.0) / (2.0 * k) * K, 1.0 / alpha);
    s.p[j - 1] = M(alpha * dn);
    s.q[j - 1] = M(-alpha * dn);
  }
  if (order == ShiftOrder::Descending) {
    std::reverse(s.p.begin(), s.p.end());
    std::reverse(s.q.begin(), s.q.end());
  }
  return s;
}

double zolotarev_bound(double gamma, int k) {
  if (gamma <= 1.0) throw InvalidArgumentError("zolotarev_bound: gamma must exceed 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 4.0 * std::exp(-k * pi2 / std::log(16.0 * gamma));
}

}  // namespace usp
