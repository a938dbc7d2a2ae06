#pragma once

#include <Eigen/Dense>
#include <vector>

#include "usp/errors.hpp"

namespace usp {

// Banded matrix in diagonal-major storage: entry (i,j) with
// j - upper <= i <= j + lower lives at data(upper + i - j, j).
class BandedMatrix {
 public:
  BandedMatrix() : rows_(0), cols_(0), lower_(0), upper_(0) {}
  BandedMatrix(int rows, int cols, int lower, int upper);

  static BandedMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(int i, int j) const {
    return i >= 0 && i < rows_ && j >= 0 && j < cols_ && j - i <= upper_ && i - j <= lower_;
  }

  double operator()(int i, int j) const {
    return in_band(i, j) ? data_(upper_ + i - j, j) : 0.0;
  }
  // Mutable access; (i,j) must be inside the declared band.
  double& at(int i, int j);

  BandedMatrix transpose() const;
  // Leading rows2 x cols2 block.
  BandedMatrix truncated(int rows2, int cols2) const;
  Eigen::MatrixXd dense() const;

  // this * X
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  // X * this
  Eigen::MatrixXd apply_right(const Eigen::MatrixXd& X) const;

  // True if every entry outside the declared band of the dense image is zero
  // (always true by construction) and dimensions are consistent.
  double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  int rows_, cols_, lower_, upper_;
  Eigen::MatrixXd data_;  // (lower+upper+1) x cols
};

BandedMatrix band_add_scaled(const BandedMatrix& A, const BandedMatrix& B, double s);
BandedMatrix band_matmul(const BandedMatrix& A, const BandedMatrix& B);

enum class SolveSide { Left, Right };

// PA = LU of a square banded matrix with partial pivoting; fill-in adds
// `lower` extra superdiagonals.
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& A);

  int size() const { return n_; }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  void solve_in_place(Eigen::MatrixXd& rhs) const;

 private:
  int n_, kl_, ku_;
  Eigen::MatrixXd fac_;  // (2*kl + ku + 1) x n
  std::vector<int> piv_;
};

// side == Left: solve M X = RHS where F factors M.
// side == Right: solve X M = RHS where F factors M^T.
Eigen::MatrixXd band_solve(const BandedLU& F, const Eigen::MatrixXd& rhs, SolveSide side);

}  // namespace usp
