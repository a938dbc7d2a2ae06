#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "usp/recomb.hpp"
#include "usp/spectra.hpp"
#include "usp/usops.hpp"

using namespace usp;

namespace {

// All eigenvalues of the second-order pencil D2 T - lambda S1 S0 T at
// truncation n (dense generalized eigensolver as an independent oracle).
Eigen::VectorXd dirichlet2_eigs(int n, const std::vector<BoundarySpec>& cs, int d = 2) {
  TransformOp T = build_transform(cs, n, ScalingRule::DiagonalUnity, d);
  Eigen::MatrixXd Td = T.matrix.dense();
  Eigen::MatrixXd A = testor::dense_diff(d, n) * Td;
  Eigen::MatrixXd B = testor::dense_conv_chain(d, n) * Td;
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(A.topLeftCorner(n - d, n - d),
                                                     B.topLeftCorner(n - d, n - d));
  Eigen::VectorXd out(n - d);
  for (int i = 0; i < n - d; ++i) {
    auto a = ges.alphas()[i];
    double b = ges.betas()[i];
    out[i] = a.real() / b;
  }
  return out;
}

}  // namespace

TEST_CASE("characteristic coefficients closed forms") {
  auto [a, b] = char_coeffs_dirichlet2(6);
  CHECK(a.values[0] * std::exp(a.log_scale) == doctest::Approx(56.0).epsilon(1e-13));
  CHECK(b.values[0] * std::exp(b.log_scale) == doctest::Approx(84.0).epsilon(1e-13));

  for (int n = 4; n <= 64; n += 2) {
    auto [an, bn] = char_coeffs_dirichlet2(n);
    for (double v : an.values) CHECK(v > 0.0);
    for (double v : bn.values) CHECK(v > 0.0);
    CHECK(an.values[1] / an.values[0] > 0.0);
  }
  CHECK_THROWS_AS(char_coeffs_dirichlet2(5), InvalidArgumentError);
}

TEST_CASE("newton_bound hand cases") {
  // lambda^2 + 3 lambda + 2, roots -1 and -2.
  CharCoeffs c;
  c.values = {1.0, 3.0, 2.0};
  auto [lo, hi] = newton_bound(c);
  CHECK(hi == doctest::Approx(std::sqrt(5.0)));
  CHECK(lo == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(hi >= 2.0);
  CHECK(lo <= 1.0);

  CharCoeffs bad;
  bad.values = {1.0, 0.0, 2.0};  // complex pair
  CHECK_THROWS_AS(newton_bound(bad), ComplexSpectrumError);
}

TEST_CASE("dirichlet2_bounds closed form and enclosure") {
  // Large-n limit of the near end: -sqrt(6).
  SpectralInterval big = dirichlet2_bounds(100000);
  CHECK(big.hi == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-3));
  CHECK(big.hi <= -2.44);
  CHECK(big.hi >= -2.4675);  // never past the true limit -pi^2/4

  std::vector<BoundarySpec> dpair = {{Side::Left, BCKind::Dirichlet, 0.0},
                                     {Side::Right, BCKind::Dirichlet, 0.0}};
  for (int n : {16, 32, 64}) {
    // Bound parameter n corresponds to the (n-1)-column truncation.
    SpectralInterval s = dirichlet2_bounds(n);
    Eigen::VectorXd ev = dirichlet2_eigs(n + 1, dpair);
    for (int i = 0; i < ev.size(); ++i) {
      CHECK(ev[i] >= s.lo - 1e-9 * std::abs(s.lo));
      CHECK(ev[i] <= s.hi + 1e-9 * std::abs(s.hi));
    }
    // Sharpness at both ends (established for n >= 32; the far end at n = 16
    // sits 9.4% from the bound).
    if (n >= 32) {
      CHECK(std::abs(ev.minCoeff() / s.lo - 1.0) < 0.09);
      CHECK(std::abs(ev.maxCoeff() / s.hi - 1.0) < 0.09);
    }
  }

  // The far end widens like n^4 while the near end climbs toward -sqrt(6)
  // from below.
  SpectralInterval s16 = dirichlet2_bounds(16), s32 = dirichlet2_bounds(32);
  CHECK(s32.lo <= s16.lo);
  CHECK(s32.hi >= s16.hi);
  CHECK(s32.hi <= -std::sqrt(6.0));
}

TEST_CASE("interval arithmetic") {
  SpectralInterval neg{-10.0, -2.0, false};
  SpectralInterval r = reciprocal_interval(neg);
  CHECK(r.lo == doctest::Approx(-0.5));
  CHECK(r.hi == doctest::Approx(-0.1));
  CHECK(r.reciprocal);
  SpectralInterval rr = reciprocal_interval(r);
  CHECK(rr.lo == doctest::Approx(-10.0));
  CHECK(!rr.reciprocal);

  SpectralInterval pos{2.0, 10.0, false};
  SpectralInterval rp = reciprocal_interval(pos);
  CHECK(rp.lo == doctest::Approx(0.1));
  CHECK(rp.hi == doctest::Approx(0.5));

  CHECK_THROWS_AS(reciprocal_interval(SpectralInterval{-1.0, 1.0, false}),
                  IndefiniteOperatorError);

  // Shifts.
  SpectralInterval base{-10.0, -2.0, false};
  SpectralInterval sh = shifted_interval(base, {0.0, 1.0});
  CHECK(sh.lo == doctest::Approx(-11.0));
  CHECK(sh.hi == doctest::Approx(-2.0));
  SpectralInterval same = shifted_interval(base, {0.0, 0.0});
  CHECK(same.lo == base.lo);
  CHECK(same.hi == base.hi);
  CHECK_THROWS_AS(shifted_interval(base, {-5.0, -3.0}), IndefiniteOperatorError);
  CHECK_THROWS_AS(shifted_interval(base, {1.0, 0.0}), InvalidArgumentError);
}

TEST_CASE("empirical interval") {
  BandedMatrix I = BandedMatrix::identity(8);
  SpectralInterval id = empirical_interval(I, I, 1000);
  CHECK(id.lo == doctest::Approx(1.0 / 1.1));
  CHECK(id.hi == doctest::Approx(1.1));

  // Dirichlet second order: empirical interval inside the closed form.
  int n = 32;
  TransformOp T = closed_form_transform(ClosedFormKind::TD, n);
  BandedMatrix stiff = band_matmul(diff_op(2, n), T.matrix).truncated(n - 2, n - 2);
  BandedMatrix mass = band_matmul(conv_chain(2, n), T.matrix).truncated(n - 2, n - 2);
  SpectralInterval emp = empirical_interval(stiff, mass, 20000);
  SpectralInterval cf = dirichlet2_bounds(n - 1);
  CHECK(emp.lo >= cf.lo * 1.2);  // same scale; 1.1 inflation may poke past cf
  CHECK(emp.hi < 0.0);
  // The actual eigenvalues of the same truncation lie inside the interval.
  std::vector<BoundarySpec> dpair = {{Side::Left, BCKind::Dirichlet, 0.0},
                                     {Side::Right, BCKind::Dirichlet, 0.0}};
  Eigen::VectorXd ev = dirichlet2_eigs(n, dpair);
  CHECK(ev.minCoeff() >= emp.lo);
  CHECK(ev.maxCoeff() <= emp.hi);

  // Neumann-right: no closed form; interval is negative and excludes zero.
  TransformOp TN = closed_form_transform(ClosedFormKind::TN, n);
  BandedMatrix stiffN = band_matmul(diff_op(2, n), TN.matrix).truncated(n - 2, n - 2);
  BandedMatrix massN = band_matmul(conv_chain(2, n), TN.matrix).truncated(n - 2, n - 2);
  SpectralInterval en = empirical_interval(stiffN, massN, 20000);
  CHECK(en.hi < 0.0);
  CHECK(en.lo < en.hi);
}

TEST_CASE("norm interval encloses the clamped fourth-order spectrum in modulus") {
  int n = 24;
  TransformOp TF = closed_form_transform(ClosedFormKind::TF, n);
  BandedMatrix stiff = band_matmul(diff_op(4, n), TF.matrix).truncated(n - 4, n - 4);
  BandedMatrix mass = band_matmul(conv_chain(4, n), TF.matrix).truncated(n - 4, n - 4);
  SpectralInterval ti = modulus_interval(stiff, mass);
  CHECK(ti.lo > 0.0);
  // The truncated pencil has complex conjugate pairs at the large end, so the
  // enclosure is checked in modulus.
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(stiff.dense(), mass.dense());
  for (int i = 0; i < n - 4; ++i) {
    std::complex<double> ev = ges.alphas()[i] / std::complex<double>(ges.betas()[i], 0.0);
    CHECK(std::abs(ev) >= ti.lo);
    CHECK(std::abs(ev) <= ti.hi);
  }
}
