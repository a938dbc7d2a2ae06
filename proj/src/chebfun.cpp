#include "usp/chebfun.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace usp {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const int n = int(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles from direct trig: a multiplicative recurrence drifts by
  // O(n*eps), which pollutes the small trailing coefficients.
  std::vector<std::complex<double>> tw(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    double ang = -2.0 * std::numbers::pi * k / n;
    tw[k] = {std::cos(ang), std::sin(ang)};
  }
  for (int len = 2; len <= n; len <<= 1) {
    int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k], v = a[i + k + len / 2] * tw[size_t(k) * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// DCT-I based coefficient transform of one column holding values at
// descending second-kind points; length n, N = n - 1.
void dct1_column(Eigen::VectorXd& v) {
  const int n = int(v.size());
  if (n == 1) return;
  const int N = n - 1;
  std::vector<std::complex<double>> w(2 * N);
  for (int k = 0; k <= N; ++k) w[k] = v[k];
  for (int k = 1; k < N; ++k) w[2 * N - k] = v[k];
  fft_radix2(w);
  for (int j = 0; j <= N; ++j) v[j] = w[j].real() / N;
  v[0] *= 0.5;
  v[N] *= 0.5;
}

// Dense DCT-I matrix M with c = M v (v at descending points).
Eigen::MatrixXd dct1_matrix(int n) {
  Eigen::MatrixXd M(n, n);
  if (n == 1) {
    M(0, 0) = 1.0;
    return M;
  }
  const int N = n - 1;
  for (int j = 0; j <= N; ++j) {
    double cj = (j == 0 || j == N) ? 1.0 : 2.0;
    for (int k = 0; k <= N; ++k) {
      double wk = (k == 0 || k == N) ? 0.5 : 1.0;
      M(j, k) = cj / N * wk * std::cos(j * k * std::numbers::pi / N);
    }
  }
  return M;
}

// Transform every column (values at descending second-kind points) to
// Chebyshev coefficients.
void transform_columns(Eigen::MatrixXd& S) {
  const int n = int(S.rows());
  if (n == 1) return;
  if (power_of_two(n - 1)) {
    Eigen::VectorXd col(n);
    for (int c = 0; c < S.cols(); ++c) {
      col = S.col(c);
      dct1_column(col);
      S.col(c) = col;
    }
  } else {
    S = dct1_matrix(n) * S;
  }
}

double clenshaw_1d(const double* c, int n, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 1; --k) {
    double b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

void check_domain(double x, double y) {
  if (std::abs(x) > 1.0 + 1e-12 || std::abs(y) > 1.0 + 1e-12)
    throw DomainError("evaluation point outside [-1,1]^2");
}

}  // namespace

Eigen::VectorXd cheb_points(int n) {
  if (n < 1) throw InvalidArgumentError("cheb_points: need n >= 1");
  Eigen::VectorXd x(n);
  if (n == 1) {
    x[0] = 0.0;
    return x;
  }
  for (int k = 0; k < n; ++k) x[k] = -std::cos(k * std::numbers::pi / (n - 1));
  return x;
}

Eigen::VectorXd vals_to_coeffs(const Eigen::VectorXd& vals) {
  Eigen::VectorXd v = vals.reverse();  // ascending grid -> descending points
  Eigen::MatrixXd m = v;
  transform_columns(m);
  return m.col(0);
}

Eigen::VectorXd coeffs_to_vals(const Eigen::VectorXd& coeffs) {
  const int n = int(coeffs.size());
  Eigen::VectorXd x = cheb_points(n), v(n);
  for (int i = 0; i < n; ++i) v[i] = clenshaw_1d(coeffs.data(), n, x[i]);
  return v;
}

Eigen::VectorXd cheb_transform_1d(const std::function<double(double)>& f, int n) {
  Eigen::VectorXd x = cheb_points(n), v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = f(x[i]);
    if (!std::isfinite(v[i]))
      throw DomainError("non-finite sample at x = " + std::to_string(x[i]));
  }
  return vals_to_coeffs(v);
}

Cheb2D cheb_transform_2d(const std::function<double(double, double)>& f, int n, int m) {
  if (n < 1 || m < 1) throw InvalidArgumentError("cheb_transform_2d: need n, m >= 1");
  Eigen::VectorXd ys = cheb_points(n), xs = cheb_points(m);
  // Rows hold y sampled at descending points, columns x likewise.
  Eigen::MatrixXd S(n, m);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < m; ++ix) {
      double v = f(xs[m - 1 - ix], ys[n - 1 - iy]);
      if (!std::isfinite(v))
        throw DomainError("non-finite sample at (" + std::to_string(xs[m - 1 - ix]) + ", " +
                          std::to_string(ys[n - 1 - iy]) + ")");
      S(iy, ix) = v;
    }
  transform_columns(S);
  Eigen::MatrixXd St = S.transpose();
  transform_columns(St);
  Cheb2D c;
  c.coeffs = St.transpose();
  return c;
}

double clenshaw_eval_point(const Cheb2D& c, double x, double y) {
  check_domain(x, y);
  const int n = c.rows(), m = c.cols();
  Eigen::VectorXd g(m);
  for (int j = 0; j < m; ++j) g[j] = clenshaw_1d(c.coeffs.col(j).data(), n, y);
  return clenshaw_1d(g.data(), m, x);
}

std::vector<double> clenshaw_eval(const Cheb2D& c,
                                  const std::vector<std::pair<double, double>>& pts) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back(clenshaw_eval_point(c, x, y));
  return out;
}

Eigen::MatrixXd cheb_vandermonde(const Eigen::VectorXd& pts, int ncols) {
  Eigen::MatrixXd P(pts.size(), ncols);
  for (int i = 0; i < pts.size(); ++i) {
    double x = pts[i];
    double t0 = 1.0, t1 = x;
    for (int k = 0; k < ncols; ++k) {
      if (k == 0)
        P(i, k) = 1.0;
      else if (k == 1)
        P(i, k) = x;
      else {
        double t2 = 2.0 * x * t1 - t0;
        P(i, k) = t2;
        t0 = t1;
        t1 = t2;
      }
    }
  }
  return P;
}

Eigen::MatrixXd eval_grid(const Cheb2D& c, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  for (int i = 0; i < xs.size(); ++i) check_domain(xs[i], 0.0);
  for (int i = 0; i < ys.size(); ++i) check_domain(0.0, ys[i]);
  Eigen::MatrixXd Py = cheb_vandermonde(ys, c.rows());
  Eigen::MatrixXd Px = cheb_vandermonde(xs, c.cols());
  return Py * c.coeffs * Px.transpose();
}

bool is_resolved(const Cheb2D& c, double tol) {
  const int n = c.rows(), m = c.cols();
  double mx = c.coeffs.cwiseAbs().maxCoeff();
  double floor_guard = std::max(mx, 1e-300);
  double tail = 0.0;
  if (n >= 2) tail = std::max(tail, c.coeffs.bottomRows(2).cwiseAbs().maxCoeff());
  if (m >= 2) tail = std::max(tail, c.coeffs.rightCols(2).cwiseAbs().maxCoeff());
  return tail <= tol * floor_guard;
}

Cheb2D pad_or_trim(const Cheb2D& c, int n2, int m2) {
  if (n2 < 1 || m2 < 1) throw InvalidArgumentError("pad_or_trim: need positive target size");
  Cheb2D r;
  r.basis = c.basis;
  r.coeffs = Eigen::MatrixXd::Zero(n2, m2);
  int nr = std::min(n2, c.rows()), nc = std::min(m2, c.cols());
  r.coeffs.topLeftCorner(nr, nc) = c.coeffs.topLeftCorner(nr, nc);
  return r;
}

}  // namespace usp
