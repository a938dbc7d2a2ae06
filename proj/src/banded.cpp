#include "usp/banded.hpp"

#include <algorithm>
#include <cmath>

namespace usp {

BandedMatrix::BandedMatrix(int rows, int cols, int lower, int upper)
    : rows_(rows), cols_(cols), lower_(lower), upper_(upper) {
  if (rows < 0 || cols < 0 || lower < 0 || upper < 0)
    throw DimensionError("banded matrix dimensions must be nonnegative");
  if (lower >= std::max(rows, 1) + std::max(cols, 1) || upper >= std::max(rows, 1) + std::max(cols, 1))
    throw DimensionError("bandwidths exceed matrix dimensions");
  data_ = Eigen::MatrixXd::Zero(lower + upper + 1, cols);
}

BandedMatrix BandedMatrix::identity(int n) {
  BandedMatrix I(n, n, 0, 0);
  for (int j = 0; j < n; ++j) I.at(j, j) = 1.0;
  return I;
}

double& BandedMatrix::at(int i, int j) {
  if (!in_band(i, j)) throw DimensionError("banded entry outside declared band");
  return data_(upper_ + i - j, j);
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix T(cols_, rows_, upper_, lower_);
  for (int j = 0; j < cols_; ++j) {
    int ilo = std::max(0, j - upper_), ihi = std::min(rows_ - 1, j + lower_);
    for (int i = ilo; i <= ihi; ++i) T.at(j, i) = (*this)(i, j);
  }
  return T;
}

BandedMatrix BandedMatrix::truncated(int rows2, int cols2) const {
  if (rows2 > rows_ || cols2 > cols_) throw DimensionError("truncation enlarges matrix");
  BandedMatrix R(rows2, cols2, std::min(lower_, rows2 - 1), std::min(upper_, cols2 - 1));
  for (int j = 0; j < cols2; ++j) {
    int ilo = std::max(0, j - R.upper()), ihi = std::min(rows2 - 1, j + R.lower());
    for (int i = ilo; i <= ihi; ++i) {
      double v = (*this)(i, j);
      if (v != 0.0) R.at(i, j) = v;
    }
  }
  return R;
}

Eigen::MatrixXd BandedMatrix::dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int j = 0; j < cols_; ++j) {
    int ilo = std::max(0, j - upper_), ihi = std::min(rows_ - 1, j + lower_);
    for (int i = ilo; i <= ihi; ++i) D(i, j) = (*this)(i, j);
  }
  return D;
}

Eigen::MatrixXd BandedMatrix::apply(const Eigen::MatrixXd& X) const {
  if (X.rows() != cols_) throw DimensionError("apply: dimension mismatch");
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(rows_, X.cols());
  for (int c = 0; c < X.cols(); ++c) {
    for (int j = 0; j < cols_; ++j) {
      const double xjc = X(j, c);
      if (xjc == 0.0) continue;
      int ilo = std::max(0, j - upper_), ihi = std::min(rows_ - 1, j + lower_);
      for (int i = ilo; i <= ihi; ++i) Y(i, c) += data_(upper_ + i - j, j) * xjc;
    }
  }
  return Y;
}

Eigen::MatrixXd BandedMatrix::apply_right(const Eigen::MatrixXd& X) const {
  if (X.cols() != rows_) throw DimensionError("apply_right: dimension mismatch");
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(X.rows(), cols_);
  for (int j = 0; j < cols_; ++j) {
    int klo = std::max(0, j - upper_), khi = std::min(rows_ - 1, j + lower_);
    for (int k = klo; k <= khi; ++k) Y.col(j) += data_(upper_ + k - j, j) * X.col(k);
  }
  return Y;
}

BandedMatrix band_add_scaled(const BandedMatrix& A, const BandedMatrix& B, double s) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw DimensionError("band_add_scaled: dimension mismatch");
  BandedMatrix C(A.rows(), A.cols(), std::max(A.lower(), B.lower()), std::max(A.upper(), B.upper()));
  for (int j = 0; j < C.cols(); ++j) {
    int ilo = std::max(0, j - C.upper()), ihi = std::min(C.rows() - 1, j + C.lower());
    for (int i = ilo; i <= ihi; ++i) {
      double v = A(i, j) + s * B(i, j);
      if (v != 0.0 || C.in_band(i, j)) C.at(i, j) = v;
    }
  }
  return C;
}

BandedMatrix band_matmul(const BandedMatrix& A, const BandedMatrix& B) {
  if (A.cols() != B.rows()) throw DimensionError("band_matmul: dimension mismatch");
  int lower = std::min(A.rows() - 1, A.lower() + B.lower());
  int upper = std::min(B.cols() - 1, A.upper() + B.upper());
  BandedMatrix C(A.rows(), B.cols(), std::max(lower, 0), std::max(upper, 0));
  for (int j = 0; j < C.cols(); ++j) {
    int klo = std::max(0, j - B.upper()), khi = std::min(B.rows() - 1, j + B.lower());
    for (int k = klo; k <= khi; ++k) {
      const double bkj = B(k, j);
      if (bkj == 0.0) continue;
      int ilo = std::max({0, k - A.upper(), j - C.upper()});
      int ihi = std::min({A.rows() - 1, k + A.lower(), j + C.lower()});
      for (int i = ilo; i <= ihi; ++i) C.at(i, j) += A(i, k) * bkj;
    }
  }
  return C;
}

BandedLU::BandedLU(const BandedMatrix& A) {
  if (A.rows() != A.cols()) throw DimensionError("band_lu: matrix must be square");
  n_ = A.rows();
  kl_ = A.lower();
  ku_ = A.upper();
  const int ldab = 2 * kl_ + ku_ + 1;
  fac_ = Eigen::MatrixXd::Zero(ldab, n_);
  piv_.assign(n_, 0);
  // Entry (i,j) lives at fac_(kl_ + ku_ + i - j, j); the top kl_ rows hold fill-in.
  for (int j = 0; j < n_; ++j) {
    int ilo = std::max(0, j - ku_), ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i) fac_(kl_ + ku_ + i - j, j) = A(i, j);
  }
  const int kv = kl_ + ku_;  // fill-in extends the upper bandwidth to kv
  for (int j = 0; j < n_; ++j) {
    int ipmax = std::min(n_ - 1, j + kl_);
    int imax = j;
    double vmax = std::abs(fac_(kv, j));
    for (int i = j + 1; i <= ipmax; ++i) {
      double v = std::abs(fac_(kv + i - j, j));
      if (v > vmax) {
        vmax = v;
        imax = i;
      }
    }
    if (vmax == 0.0)
      throw SingularMatrixError("banded LU: zero pivot in column " + std::to_string(j));
    piv_[j] = imax;
    int jend = std::min(n_ - 1, j + kv);
    if (imax != j) {
      for (int jc = j; jc <= jend; ++jc)
        std::swap(fac_(kv + j - jc, jc), fac_(kv + imax - jc, jc));
    }
    const double pivot = fac_(kv, j);
    for (int i = j + 1; i <= ipmax; ++i) {
      double l = fac_(kv + i - j, j) / pivot;
      fac_(kv + i - j, j) = l;
      if (l == 0.0) continue;
      for (int jc = j + 1; jc <= jend; ++jc)
        fac_(kv + i - jc, jc) -= l * fac_(kv + j - jc, jc);
    }
  }
}

void BandedLU::solve_in_place(Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != n_) throw DimensionError("band_solve: RHS dimension mismatch");
  const int kv = kl_ + ku_;
  // Forward: apply P and L.
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) rhs.row(j).swap(rhs.row(piv_[j]));
    int ihi = std::min(n_ - 1, j + kl_);
    for (int i = j + 1; i <= ihi; ++i) {
      double l = fac_(kv + i - j, j);
      if (l != 0.0) rhs.row(i) -= l * rhs.row(j);
    }
  }
  // Backward: U.
  for (int j = n_ - 1; j >= 0; --j) {
    rhs.row(j) /= fac_(kv, j);
    int ilo = std::max(0, j - kv);
    for (int i = ilo; i < j; ++i) {
      double u = fac_(kv + i - j, j);
      if (u != 0.0) rhs.row(i) -= u * rhs.row(j);
    }
  }
}

Eigen::MatrixXd BandedLU::solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd x = rhs;
  solve_in_place(x);
  return x;
}

Eigen::MatrixXd band_solve(const BandedLU& F, const Eigen::MatrixXd& rhs, SolveSide side) {
  if (side == SolveSide::Left) return F.solve(rhs);
  Eigen::MatrixXd xt = F.solve(rhs.transpose());
  return xt.transpose();
}

}  // namespace usp
