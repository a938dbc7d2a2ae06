#include "usp/usops.hpp"

#include <cmath>

namespace usp {

BandedMatrix diff_op(int l, int n) {
  if (l < 1) throw InvalidArgumentError("diff_op: order must be >= 1 (order 0 is the identity)");
  BandedMatrix D(n, n, 0, std::min(l, n - 1));
  double scale = 1.0;
  for (int t = 1; t < l; ++t) scale *= 2.0 * t;  // 2^{l-1} (l-1)!
  for (int i = 0; i + l < n; ++i) D.at(i, i + l) = scale * (l + i);
  return D;
}

BandedMatrix conv_op(int l, int n) {
  if (l < 0) throw InvalidArgumentError("conv_op: order must be >= 0");
  BandedMatrix S(n, n, 0, std::min(2, n - 1));
  if (l == 0) {
    S.at(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) S.at(i, i) = 0.5;
    for (int i = 0; i + 2 < n; ++i) S.at(i, i + 2) = -0.5;
  } else {
    for (int i = 0; i < n; ++i) S.at(i, i) = double(l) / (l + i);
    for (int i = 0; i + 2 < n; ++i) S.at(i, i + 2) = -double(l) / (l + i + 2);
  }
  return S;
}

BandedMatrix conv_chain(int l, int n) {
  if (l < 1) throw InvalidArgumentError("conv_chain: order must be >= 1");
  BandedMatrix C = conv_op(0, n);
  for (int t = 1; t < l; ++t) C = band_matmul(conv_op(t, n), C);
  return C;
}

BandedMatrix mult_op(const Eigen::VectorXd& rho, int n) {
  // Chop rho's trailing coefficients at 1e-15 relative.
  int m = int(rho.size());
  double amax = m ? rho.cwiseAbs().maxCoeff() : 0.0;
  while (m > 1 && std::abs(rho[m - 1]) <= 1e-15 * amax) --m;
  if (m > n) throw InvalidArgumentError("mult_op: coefficient length exceeds truncation");
  auto a = [&](int k) { return (k >= 0 && k < m) ? rho[k] : 0.0; };
  const int bw = m - 1;
  BandedMatrix M(n, n, std::min(bw, n - 1), std::min(bw, n - 1));
  for (int k = 0; k < n; ++k) {
    int ilo = std::max(0, k - bw), ihi = std::min(n - 1, k + bw);
    for (int i = ilo; i <= ihi; ++i) {
      double tsum = (i >= k) ? a(i - k) : 0.0;
      double hsum = (i == 0) ? a(k) : a(k + i) + a(k - i);
      double v = 0.5 * (tsum + hsum);
      if (v != 0.0) M.at(i, k) = v;
    }
  }
  return M;
}

}  // namespace usp
