#include "usp/recomb.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace usp {

double boundary_row(const BoundarySpec& b, int i) {
  const double sgn = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^i
  const double ii = double(i) * i;
  switch (b.kind) {
    case BCKind::Dirichlet:
      return b.side == Side::Right ? 1.0 : sgn;
    case BCKind::Neumann:
      // T_i'(1) = i^2, T_i'(-1) = -(-1)^i i^2
      return b.side == Side::Right ? ii : -sgn * ii;
    case BCKind::Robin:
      // u(1) + theta u'(1), and u(-1) - theta u'(-1) on the left
      return b.side == Side::Right ? 1.0 + b.theta * ii : sgn * (1.0 + b.theta * ii);
  }
  return 0.0;
}

double boundary_row_monomial(const BoundarySpec& b, int k) {
  const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
  switch (b.kind) {
    case BCKind::Dirichlet:
      return b.side == Side::Right ? 1.0 : sgn;
    case BCKind::Neumann:
      return b.side == Side::Right ? double(k) : -sgn * k;
    case BCKind::Robin:
      return b.side == Side::Right ? 1.0 + b.theta * k : sgn * (1.0 + b.theta * k);
  }
  return 0.0;
}

namespace {

double diff_diag_scale(int l, int k) {
  // (D_l T)(k,k) = 2^{l-1} (l-1)! (l+k) * T(k+l, k)
  double scale = 1.0;
  for (int t = 1; t < l; ++t) scale *= 2.0 * t;
  return scale * (l + k);
}

std::string describe(const std::vector<BoundarySpec>& cs) {
  std::string id;
  for (const auto& b : cs) {
    id += (b.side == Side::Left) ? "L" : "R";
    id += (b.kind == BCKind::Dirichlet) ? 'D' : (b.kind == BCKind::Neumann) ? 'N' : 'R';
  }
  return id;
}

}  // namespace

TransformOp build_transform(const std::vector<BoundarySpec>& constraints, int n,
                            ScalingRule scaling, int diff_order) {
  const int N = int(constraints.size());
  if (n <= N) throw InvalidArgumentError("build_transform: need n > number of constraints");
  TransformOp op;
  op.constraints = constraints;
  op.scaling = scaling;
  op.bc_id = describe(constraints);
  op.matrix = BandedMatrix(n, n, N, 0);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd B(N, N + 1);
    for (int j = 0; j < N; ++j)
      for (int t = 0; t <= N; ++t) B(j, t) = boundary_row(constraints[j], k + t);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.dimensionOfKernel() != 1)
      throw DegenerateConstraintsError("degenerate boundary constraints at column " +
                                       std::to_string(k));
    Eigen::VectorXd v = lu.kernel().col(0);
    double s;
    if (scaling == ScalingRule::UnitLeading) {
      if (v[0] == 0.0)
        throw DegenerateConstraintsError("unit-leading scaling impossible at column " +
                                         std::to_string(k));
      s = 1.0 / v[0];
    } else {
      if (v[N] == 0.0)
        throw DegenerateConstraintsError("diagonal-unity scaling impossible at column " +
                                         std::to_string(k));
      s = 1.0 / (v[N] * diff_diag_scale(diff_order, k));
    }
    for (int t = 0; t <= N && k + t < n; ++t) {
      double val = s * v[t];
      if (val != 0.0) op.matrix.at(k + t, k) = val;
    }
  }
  return op;
}

TransformOp closed_form_transform(ClosedFormKind kind, int n, double theta) {
  TransformOp op;
  // The printed TD/TF columns have unit leading entries; TN/TR carry the
  // 1/(2k+4) third entry that makes diag(D2 T) = 1.
  op.scaling = (kind == ClosedFormKind::TD || kind == ClosedFormKind::TF)
                   ? ScalingRule::UnitLeading
                   : ScalingRule::DiagonalUnity;
  const int N = (kind == ClosedFormKind::TF) ? 4 : 2;
  if (n <= N) throw InvalidArgumentError("closed_form_transform: truncation too small");
  op.matrix = BandedMatrix(n, n, N, 0);
  auto set = [&](int i, int j, double v) {
    if (i < n && v != 0.0) op.matrix.at(i, j) = v;
  };
  for (int k = 0; k < n; ++k) {
    switch (kind) {
      case ClosedFormKind::TD: {
        op.bc_id = "LD RD";
        set(k, k, 1.0);
        set(k + 2, k, -1.0);
        op.constraints = {{Side::Left, BCKind::Dirichlet, 0.0}, {Side::Right, BCKind::Dirichlet, 0.0}};
        break;
      }
      case ClosedFormKind::TN: {
        op.bc_id = "LD RN";
        const double kk = k;
        const double den = 2.0 * kk * kk + 2.0 * kk + 1.0;
        set(k, k, -(2.0 * kk * kk + 6.0 * kk + 5.0) / (2.0 * (kk + 2.0) * den));
        set(k + 1, k, -2.0 * (kk + 1.0) / ((kk + 2.0) * den));
        set(k + 2, k, 1.0 / (2.0 * kk + 4.0));
        op.constraints = {{Side::Left, BCKind::Dirichlet, 0.0}, {Side::Right, BCKind::Neumann, 0.0}};
        break;
      }
      case ClosedFormKind::TR: {
        op.bc_id = "LD RR";
        const double kk = k;
        const double den = 2.0 * theta * kk * kk + 2.0 * theta * kk + theta + 2.0;
        if (den == 0.0)
          throw InvalidArgumentError("closed_form_transform: Robin denominator vanishes at column " +
                                     std::to_string(k));
        set(k, k, -(2.0 * theta * kk * kk + 6.0 * theta * kk + 5.0 * theta + 2.0) /
                      (2.0 * (kk + 2.0) * den));
        set(k + 1, k, -2.0 * (theta + theta * kk) / ((kk + 2.0) * den));
        set(k + 2, k, 1.0 / (2.0 * kk + 4.0));
        op.constraints = {{Side::Left, BCKind::Dirichlet, 0.0}, {Side::Right, BCKind::Robin, theta}};
        break;
      }
      case ClosedFormKind::TF: {
        op.bc_id = "LD RD LN RN";
        const double kk = k;
        set(k, k, 1.0);
        set(k + 2, k, -2.0 * (kk + 2.0) / (kk + 3.0));
        set(k + 4, k, (kk + 1.0) / (kk + 3.0));
        op.constraints = {{Side::Left, BCKind::Dirichlet, 0.0},
                          {Side::Right, BCKind::Dirichlet, 0.0},
                          {Side::Left, BCKind::Neumann, 0.0},
                          {Side::Right, BCKind::Neumann, 0.0}};
        break;
      }
    }
  }
  return op;
}

}  // namespace usp
