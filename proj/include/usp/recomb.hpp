#pragma once

#include <string>
#include <vector>

#include "usp/banded.hpp"

namespace usp {

enum class Side { Left, Right };
enum class BCKind { Dirichlet, Neumann, Robin };

struct BoundarySpec {
  Side side = Side::Left;
  BCKind kind = BCKind::Dirichlet;
  double theta = 0.0;  // Robin only
};

enum class ScalingRule { UnitLeading, DiagonalUnity };

// The boundary functional applied to T_i.
double boundary_row(const BoundarySpec& b, int i);

// The boundary functional applied to x^k (used by the boundary lifting blends).
double boundary_row_monomial(const BoundarySpec& b, int k);

struct TransformOp {
  BandedMatrix matrix;  // n x n, lower-triangular with lower bandwidth N
  std::vector<BoundarySpec> constraints;
  ScalingRule scaling = ScalingRule::DiagonalUnity;
  std::string bc_id;
};

// Column k spans T_k..T_{k+N} and annihilates all N functionals; the free
// scale is fixed by the scaling rule. diff_order is the derivative order whose
// diagonal the DiagonalUnity rule normalizes (2 for second-order problems,
// 4 for the clamped fourth-order basis).
TransformOp build_transform(const std::vector<BoundarySpec>& constraints, int n,
                            ScalingRule scaling = ScalingRule::DiagonalUnity, int diff_order = 2);

enum class ClosedFormKind { TD, TN, TR, TF };

// The printed closed-form recombination bases.
TransformOp closed_form_transform(ClosedFormKind kind, int n, double theta = 0.0);

}  // namespace usp
