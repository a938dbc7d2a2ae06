#include "doctest.h"
#include "oracles.hpp"
#include "usp/oracle.hpp"
#include "usp/usops.hpp"

using namespace usp;

TEST_CASE("diff_op closed forms") {
  BandedMatrix D2 = diff_op(2, 5);
  CHECK(D2(0, 2) == 4.0);
  CHECK(D2(1, 3) == 6.0);
  CHECK(D2(2, 4) == 8.0);
  CHECK(D2.dense().cwiseAbs().sum() == doctest::Approx(18.0));  // nothing else

  BandedMatrix D1 = diff_op(1, 4);
  CHECK(D1(0, 1) == 1.0);
  CHECK(D1(1, 2) == 2.0);
  CHECK(D1(2, 3) == 3.0);

  // T3'' = 24x = 6 C_1^(2).
  Eigen::MatrixXd e3 = Eigen::MatrixXd::Zero(6, 1);
  e3(3, 0) = 1.0;
  Eigen::MatrixXd r = diff_op(2, 6).apply(e3);
  CHECK(r(1, 0) == doctest::Approx(6.0));
  r(1, 0) = 0.0;
  CHECK(r.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(diff_op(0, 4), InvalidArgumentError);
}

TEST_CASE("conv_op closed forms") {
  BandedMatrix S0 = conv_op(0, 4);
  CHECK(S0(0, 0) == 1.0);
  CHECK(S0(1, 1) == 0.5);
  CHECK(S0(2, 2) == 0.5);
  CHECK(S0(3, 3) == 0.5);
  CHECK(S0(0, 2) == -0.5);
  CHECK(S0(1, 3) == -0.5);

  // T2 = (C_2^(1) - C_0^(1)) / 2.
  Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(3, 1);
  e2(2, 0) = 1.0;
  Eigen::MatrixXd v = conv_op(0, 3).apply(e2);
  CHECK(v(0, 0) == doctest::Approx(-0.5));
  CHECK(v(1, 0) == 0.0);
  CHECK(v(2, 0) == doctest::Approx(0.5));

  BandedMatrix S1 = conv_op(1, 5);
  for (int i = 0; i < 5; ++i) CHECK(S1(i, i) == doctest::Approx(1.0 / (1 + i)));
}

TEST_CASE("conv_chain") {
  CHECK((conv_chain(1, 6).dense() - conv_op(0, 6).dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((conv_chain(2, 8).dense() - testor::dense_conv_chain(2, 8)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((conv_chain(4, 12).dense() - testor::dense_conv_chain(4, 12)).cwiseAbs().maxCoeff() <=
        1e-15);

  // Constants map to constants.
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Zero(8, 1);
  e0(0, 0) = 1.0;
  for (int l : {1, 2, 4}) {
    Eigen::MatrixXd r = conv_chain(l, 8).apply(e0);
    CHECK(r(0, 0) == doctest::Approx(1.0));
    r(0, 0) = 0.0;
    CHECK(r.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("mult_op") {
  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK((mult_op(one, 5).dense() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);

  // rho = x.
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  BandedMatrix Mx = mult_op(x, 5);
  CHECK(Mx(1, 0) == 1.0);
  CHECK(Mx(0, 0) == 0.0);
  for (int k = 1; k < 5; ++k) {
    if (k - 1 >= 0) CHECK(Mx(k - 1, k) == doctest::Approx(0.5));
    if (k + 1 < 5) CHECK(Mx(k + 1, k) == doctest::Approx(0.5));
  }

  // rho = x^2 applied to T3 vs the symbolic product identity oracle.
  Eigen::VectorXd x2(3);
  x2 << 0.5, 0.0, 0.5;  // x^2 = (T0 + T2)/2
  Eigen::MatrixXd e3 = Eigen::MatrixXd::Zero(8, 1);
  e3(3, 0) = 1.0;
  Eigen::MatrixXd got = mult_op(x2, 8).apply(e3);
  Eigen::MatrixXd ref = testor::dense_mult(x2, 8) * e3;
  CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::VectorXd toolong = Eigen::VectorXd::Ones(6);
  CHECK_THROWS_AS(mult_op(toolong, 5), InvalidArgumentError);
}

TEST_CASE("operator identities and bandwidth bookkeeping") {
  // S1 D1-based second derivative equals D2 on the leading coefficients.
  int n = 32;
  Eigen::MatrixXd second = testor::dense_conv(1, n) * Eigen::MatrixXd::Zero(n, n);
  // d^2/dx^2 = D1 applied twice with a conversion: S-consistent identity
  // D2 = (C^(1)->C^(2) differentiation of D1 coefficients). Use the library
  // matrices and compare densely on the first n-2 rows.
  Eigen::MatrixXd lhs = diff_op(2, n).dense();
  // Differentiating the C^(1) series: coefficients of (f')' in C^(2) relate to
  // D1 by the ultraspherical ladder d/dx C_k^(1) = 2 C_{k-1}^(2), giving
  // an explicit second-derivative factorization.
  Eigen::MatrixXd ladder = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) ladder(i, i + 1) = 2.0;
  Eigen::MatrixXd rhs = ladder * testor::dense_diff(1, n);
  CHECK((lhs - rhs).topRows(n - 2).cwiseAbs().maxCoeff() <= 1e-13);

  for (int l : {1, 2, 3, 4}) {
    BandedMatrix D = diff_op(l, 16);
    CHECK(D.upper() == l);
    BandedMatrix P = conv_chain(l, 16);
    CHECK(P.upper() == 2 * l);
    Eigen::MatrixXd Dd = D.dense(), Pd = P.dense();
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        if (j - i != l) CHECK(Dd(i, j) == 0.0);
        if (j < i || j - i > 2 * l) CHECK(Pd(i, j) == 0.0);
      }
  }

  // Positive multiplier: spectrum of M0[rho] within the range of rho.
  Eigen::VectorXd rho(3);
  rho << 2.0, 0.0, 0.5;  // 2 + (2x^2 - 1)/2 = 1.5 + x^2, range [1.5, 2.5]
  BandedMatrix M = mult_op(rho, 64);
  double biggest = extreme_eigs(M, BandedMatrix::identity(64), WhichEig::LargestMagnitude);
  double smallest = extreme_eigs(M, BandedMatrix::identity(64), WhichEig::SmallestMagnitude);
  CHECK(biggest <= 2.5 + 1e-8);
  CHECK(smallest >= 1.5 - 1e-8);
}
