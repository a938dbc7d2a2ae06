#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "usp/errors.hpp"

namespace usp {

enum class BasisTag { Chebyshev, Recombined, Ultraspherical };

// Tensor-product coefficients: entry (i, j) multiplies T_i(y) T_j(x).
struct Cheb2D {
  Eigen::MatrixXd coeffs;
  BasisTag basis = BasisTag::Chebyshev;
  int rows() const { return int(coeffs.rows()); }
  int cols() const { return int(coeffs.cols()); }
};

// Chebyshev points of the second kind, ascending in [-1, 1].
Eigen::VectorXd cheb_points(int n);

// Values at cheb_points(n) -> Chebyshev coefficients (and back).
Eigen::VectorXd vals_to_coeffs(const Eigen::VectorXd& vals);
Eigen::VectorXd coeffs_to_vals(const Eigen::VectorXd& coeffs);

// Interpolating coefficients of f on the n x m second-kind grid
// (n points in y, m points in x).
Cheb2D cheb_transform_2d(const std::function<double(double, double)>& f, int n, int m);

// 1D transform of a function of one variable.
Eigen::VectorXd cheb_transform_1d(const std::function<double(double)>& f, int n);

// Sum of c_{ij} T_i(y) T_j(x) by nested Clenshaw recurrences.
std::vector<double> clenshaw_eval(const Cheb2D& c, const std::vector<std::pair<double, double>>& pts);
double clenshaw_eval_point(const Cheb2D& c, double x, double y);

// Values on a tensor grid xs x ys: result(iy, ix) = series(xs[ix], ys[iy]).
Eigen::MatrixXd eval_grid(const Cheb2D& c, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

// Trailing 2 rows/columns below tol * max|coeff|.
bool is_resolved(const Cheb2D& c, double tol);

Cheb2D pad_or_trim(const Cheb2D& c, int n2, int m2);

// Chebyshev-Vandermonde matrix: (i, k) = T_k(pts[i]).
Eigen::MatrixXd cheb_vandermonde(const Eigen::VectorXd& pts, int ncols);

}  // namespace usp
