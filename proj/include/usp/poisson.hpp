#pragma once

#include <functional>
#include <vector>

#include "usp/adi.hpp"
#include "usp/chebfun.hpp"
#include "usp/recomb.hpp"
#include "usp/spectra.hpp"
#include "usp/zolotarev.hpp"

namespace usp {

enum class EquationKind { Poisson, Separable, FourthOrder };
enum class SolverChoice { Adi, Fadi, Oracle };

// One side of the square. `value` is the boundary data for the side's
// functional (null means homogeneous). For fourth-order (clamped) problems
// `value` is the Dirichlet trace and `deriv` the plain coordinate derivative
// (du/dx on x-sides, du/dy on y-sides). Second-order Neumann data is likewise
// the plain coordinate derivative; Robin data is u + theta * du/dn with the
// outward normal n.
struct SideData {
  BoundarySpec bc;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

struct ProblemSpec {
  EquationKind equation = EquationKind::Poisson;
  std::function<double(double, double)> rhs;  // f(x, y)
  std::function<double(double)> rho1, rho2;   // separable zero-order coefficients
  SideData left, right, bottom, top;          // left/right: x = -1/+1; bottom/top: y = -1/+1
  double tolerance = 1e-12;
  int max_n = 1024;
  SolverChoice solver = SolverChoice::Adi;
  int tau = 10;  // increment check cadence
};

// Boundary lifting: u = v + g with g interpolating the boundary data and v
// homogeneous. rhs_modified holds the Chebyshev coefficients of f - L g at
// the working size n + 16 used by assemble.
struct Lifting {
  Cheb2D g;             // n x n Chebyshev coefficients, rank <= 4 (<= 8 fourth-order)
  Cheb2D rhs_modified;  // (n+16) x (n+16) Chebyshev coefficients
  bool trivial = true;  // all boundary data homogeneous
};

Lifting lift_boundary(const ProblemSpec& spec, int n);

// Assemble the n x n Sylvester system; rhs_cheb must hold Chebyshev
// coefficients of the (already lifted) right-hand side with at least n + 4
// rows and columns.
SylvesterSystem assemble(const ProblemSpec& spec, int n, const Eigen::MatrixXd& rhs_cheb);

// Shift-generation intervals: ab encloses the spectrum of A2^{-1} A1 and cd
// the spectrum of -B1 B2^{-1} (reciprocals of the directional operator
// eigenvalue enclosures).
struct IntervalPair {
  SpectralInterval ab;
  SpectralInterval cd;
};

IntervalPair spectral_intervals(const ProblemSpec& spec, const SylvesterSystem& sys, int n);

struct LevelInfo {
  int n = 0;
  IntervalPair intervals;
  int shift_count = 0;
  SolveReport report;
  bool resolved = false;
};

struct AutoResult {
  Cheb2D u;  // Chebyshev-basis coefficients of the full solution
  std::vector<LevelInfo> levels;
};

// Adaptive doubling driver: n = 16, 32, ... with warm restart and descending
// shifts after the first level; stops when the Chebyshev coefficients of the
// solution are resolved to spec.tolerance.
AutoResult solve_auto(const ProblemSpec& spec);

}  // namespace usp
