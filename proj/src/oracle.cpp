#include "usp/oracle.hpp"

#include <cmath>
#include <limits>

namespace usp {

Eigen::MatrixXd kron_solve(const SylvesterSystem& sys) {
  const int n = sys.n();
  if (n > 64) throw InvalidArgumentError("kron_solve: refusing n > 64 (dense n^2 x n^2 solve)");
  Eigen::MatrixXd A1 = sys.A1.dense(), A2 = sys.A2.dense();
  Eigen::MatrixXd B1t = sys.B1.dense().transpose(), B2t = sys.B2.dense().transpose();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  // kron(P, Q): block (i, j) of size n is P(i, j) * Q.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K.block(i * n, j * n, n, n) = B2t(i, j) * A1 + B1t(i, j) * A2;
  Eigen::Map<const Eigen::VectorXd> f(sys.F.data(), n * n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  Eigen::VectorXd x = lu.solve(f);
  double resid = (K * x - f).norm();
  double scale = std::max(1.0, f.norm());
  if (!x.allFinite() || resid > 1e-6 * scale)
    throw SingularMatrixError("kron_solve: singular or ill-conditioned Kronecker system");
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
}

double extreme_eigs(const BandedMatrix& A1, const BandedMatrix& A2, WhichEig which,
                    int max_iters) {
  const int n = A1.rows();
  if (n > 512) throw InvalidArgumentError("extreme_eigs: refusing n > 512");
  // Largest of A2^{-1} A1; smallest-magnitude is the reciprocal of the
  // largest of A1^{-1} A2.
  const BandedMatrix& num = (which == WhichEig::LargestMagnitude) ? A1 : A2;
  const BandedMatrix& den = (which == WhichEig::LargestMagnitude) ? A2 : A1;
  BandedLU den_fac(den);

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  v /= v.norm();

  double lambda = 0.0, prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = band_solve(den_fac, num.apply(v), SolveSide::Left);
    lambda = v.dot(w);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (!v.allFinite())
      throw ConvergenceError("extreme_eigs: non-finite iterate");
    if (std::isfinite(prev) && std::abs(lambda - prev) <= 1e-8 * std::abs(lambda)) {
      return (which == WhichEig::LargestMagnitude) ? lambda : 1.0 / lambda;
    }
    prev = lambda;
  }
  throw ConvergenceError(
      "extreme_eigs: power iteration did not converge (complex dominant pair suspected)");
}

double scalar_adi(double lam, double mu, const ShiftSchedule& shifts) {
  double prod = 1.0;
  for (int j = 0; j < shifts.k(); ++j) {
    double p = shifts.p[j], q = shifts.q[j];
    if (lam == p || mu == q)
      throw InvalidArgumentError("scalar_adi: shift collision at shift " + std::to_string(j + 1));
    prod *= (lam - q) * (mu - p) / ((lam - p) * (mu - q));
  }
  return prod;
}

}  // namespace usp
