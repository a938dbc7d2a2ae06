#pragma once

#include <Eigen/Dense>

#include "usp/banded.hpp"

namespace usp {

// l-th order differentiation, Chebyshev T coefficients -> C^(l) coefficients.
BandedMatrix diff_op(int l, int n);

// Conversion by one step: l = 0 maps T -> C^(1); l >= 1 maps C^(l) -> C^(l+1).
BandedMatrix conv_op(int l, int n);

// S_{l-1} ... S_1 S_0: Chebyshev T -> C^(l).
BandedMatrix conv_chain(int l, int n);

// Multiplication by rho (given as Chebyshev coefficients) acting on Chebyshev
// coefficients. rho's own tail is chopped at 1e-15 relative before the
// bandwidth is fixed.
BandedMatrix mult_op(const Eigen::VectorXd& rho, int n);

}  // namespace usp
