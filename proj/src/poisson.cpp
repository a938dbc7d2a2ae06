#include "usp/poisson.hpp"

#include <cmath>
#include <limits>

#include "usp/oracle.hpp"
#include "usp/usops.hpp"

namespace usp {

namespace {

int deriv_order(EquationKind eq) { return eq == EquationKind::FourthOrder ? 4 : 2; }

std::vector<BoundarySpec> direction_constraints(const ProblemSpec& spec, const SideData& lo,
                                                const SideData& hi) {
  std::vector<BoundarySpec> cs;
  if (spec.equation == EquationKind::FourthOrder) {
    cs.push_back({Side::Left, BCKind::Dirichlet, 0.0});
    cs.push_back({Side::Left, BCKind::Neumann, 0.0});
    cs.push_back({Side::Right, BCKind::Dirichlet, 0.0});
    cs.push_back({Side::Right, BCKind::Neumann, 0.0});
  } else {
    BoundarySpec a = lo.bc, b = hi.bc;
    a.side = Side::Left;
    b.side = Side::Right;
    cs.push_back(a);
    cs.push_back(b);
  }
  return cs;
}

Eigen::VectorXd rho_coeffs(const std::function<double(double)>& rho, int m) {
  Eigen::VectorXd c = cheb_transform_1d(rho, 257);
  double mx = c.cwiseAbs().maxCoeff();
  int len = int(c.size());
  while (len > 1 && std::abs(c[len - 1]) <= 1e-15 * mx) --len;
  if (len > m)
    throw InvalidArgumentError(
        "separable coefficient needs more than the truncation's resolution");
  return c.head(len);
}

std::pair<double, double> rho_range(const std::function<double(double)>& rho) {
  Eigen::VectorXd pts = cheb_points(257);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < pts.size(); ++i) {
    double v = rho(pts[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Relative per-end inflation to make the sampled range a safe enclosure.
  return {lo - 0.05 * std::abs(lo), hi + 0.05 * std::abs(hi)};
}

// Stiffness block (D_d + S_chain * M0[rho]) * T for one direction, at size m.
BandedMatrix stiffness_block(const ProblemSpec& spec, const TransformOp& T,
                             const std::function<double(double)>& rho, int m) {
  int d = deriv_order(spec.equation);
  BandedMatrix blk = band_matmul(diff_op(d, m), T.matrix);
  if (spec.equation == EquationKind::Separable && rho) {
    BandedMatrix rterm =
        band_matmul(band_matmul(conv_chain(2, m), mult_op(rho_coeffs(rho, m), m)), T.matrix);
    blk = band_add_scaled(blk, rterm, 1.0);
  }
  return blk;
}

bool same_bc(const BoundarySpec& a, const BoundarySpec& b) {
  return a.kind == b.kind && a.theta == b.theta;
}

double apply_functional(const BoundarySpec& bc, const Eigen::VectorXd& cheb) {
  double s = 0.0;
  for (int i = 0; i < cheb.size(); ++i) s += cheb[i] * boundary_row(bc, i);
  return s;
}

Eigen::VectorXd mono_to_cheb(const Eigen::Vector4d& a, int n) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c[0] = a[0] + 0.5 * a[2];
  if (n > 1) c[1] = a[1] + 0.75 * a[3];
  if (n > 2) c[2] = 0.5 * a[2];
  if (n > 3) c[3] = 0.25 * a[3];
  return c;
}

// Degree <= 3 blend polynomials dual to the given functionals: column s of
// the result (Chebyshev coefficients, length n) satisfies L_t(B_s) = delta_ts.
// Underdetermined sets take the minimum-norm monomial solution.
Eigen::MatrixXd blend_polynomials(const std::vector<BoundarySpec>& fns, int n) {
  const int nf = int(fns.size());
  Eigen::MatrixXd M(nf, 4);
  for (int s = 0; s < nf; ++s)
    for (int k = 0; k < 4; ++k) M(s, k) = boundary_row_monomial(fns[s], k);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
  Eigen::MatrixXd B = cod.solve(Eigen::MatrixXd::Identity(nf, nf));  // 4 x nf
  if ((M * B - Eigen::MatrixXd::Identity(nf, nf)).cwiseAbs().maxCoeff() > 1e-9)
    throw DegenerateConstraintsError("boundary lifting: blend functionals are degenerate");
  Eigen::MatrixXd C(n, nf);
  for (int s = 0; s < nf; ++s) C.col(s) = mono_to_cheb(B.col(s), n);
  return C;
}

Eigen::VectorXd data_coeffs(const std::function<double(double)>& f, int n) {
  if (!f) return Eigen::VectorXd::Zero(n);
  return cheb_transform_1d(f, n);
}

// Zero the trailing coefficients below the expansion's relative roundoff
// floor; everything past the last significant coefficient is sampling noise.
Eigen::VectorXd chop_tail(const Eigen::VectorXd& c) {
  double scale = c.cwiseAbs().maxCoeff();
  if (scale == 0.0) return c;
  int last = -1;
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) >= 1e-13 * scale) last = i;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
  out.head(last + 1) = c.head(last + 1);
  return out;
}

}  // namespace

Lifting lift_boundary(const ProblemSpec& spec, int n) {
  if (!spec.rhs) throw InvalidArgumentError("lift_boundary: right-hand side required");
  const int m = n + 16;
  Lifting out;
  out.rhs_modified = cheb_transform_2d(spec.rhs, m, m);
  out.g.coeffs = Eigen::MatrixXd::Zero(n, n);

  const bool fourth = spec.equation == EquationKind::FourthOrder;

  // x-side functionals with their tangential data (functions of y), and
  // y-side functionals with data in x.
  std::vector<BoundarySpec> Lx, Ly;
  std::vector<Eigen::VectorXd> gx, gy;
  // High-resolution expansions used only for corner constants: derivative
  // functionals amplify the truncation tail of short expansions, so corner
  // values are evaluated on longer ones regardless of n.
  const int nc = std::max(n, 64);
  std::vector<Eigen::VectorXd> gx_hi, gy_hi;
  auto push_side = [&](std::vector<BoundarySpec>& fns, std::vector<Eigen::VectorXd>& data,
                       std::vector<Eigen::VectorXd>& data_hi, const SideData& sd, Side side) {
    if (fourth) {
      fns.push_back({side, BCKind::Dirichlet, 0.0});
      data.push_back(data_coeffs(sd.value, n));
      data_hi.push_back(data_coeffs(sd.value, nc));
      fns.push_back({side, BCKind::Neumann, 0.0});
      data.push_back(data_coeffs(sd.deriv, n));
      data_hi.push_back(data_coeffs(sd.deriv, nc));
    } else {
      BoundarySpec b = sd.bc;
      b.side = side;
      fns.push_back(b);
      data.push_back(data_coeffs(sd.value, n));
      data_hi.push_back(data_coeffs(sd.value, nc));
    }
  };
  push_side(Lx, gx, gx_hi, spec.left, Side::Left);
  push_side(Lx, gx, gx_hi, spec.right, Side::Right);
  push_side(Ly, gy, gy_hi, spec.bottom, Side::Left);
  push_side(Ly, gy, gy_hi, spec.top, Side::Right);

  double data_norm = 0.0;
  for (const auto& v : gx) data_norm = std::max(data_norm, v.cwiseAbs().maxCoeff());
  for (const auto& v : gy) data_norm = std::max(data_norm, v.cwiseAbs().maxCoeff());
  if (data_norm == 0.0) return out;  // homogeneous data: g = 0, RHS unchanged
  out.trivial = false;

  Eigen::MatrixXd Bx = blend_polynomials(Lx, n);  // blends in x
  Eigen::MatrixXd By = blend_polynomials(Ly, n);  // blends in y

  const int nx = int(Lx.size()), ny = int(Ly.size());
  // Corner constants c(i, j) = Lx_i(gy_j), which must match Ly_j(gx_i).
  Eigen::MatrixXd C(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      // Compatibility check on noise-chopped expansions: derivative
      // functionals amplify the interpolation noise floor of a degree-nc
      // expansion by ~nc^2, which would otherwise swamp genuine mismatches.
      double ccx = apply_functional(Lx[i], chop_tail(gy_hi[j]));
      double ccy = apply_functional(Ly[j], chop_tail(gx_hi[i]));
      double tol = (1e-10 + 1e-14 * double(nc) * double(nc)) * std::max(1.0, std::abs(ccx));
      if (std::abs(ccx - ccy) > tol)
        throw InvalidArgumentError("lift_boundary: incompatible corner data (" +
                                   std::to_string(ccx) + " vs " + std::to_string(ccy) + ")");
      // The stored corner constant uses the unchopped expansion so it stays
      // consistent with the data the blended lifting is built from.
      C(i, j) = apply_functional(Lx[i], gy_hi[j]);
    }

  // g = sum_i Bx_i(x) gx_i(y) + sum_j By_j(y) (gy_j(x) - sum_i c_ij Bx_i(x)).
  Eigen::MatrixXd& G = out.g.coeffs;
  for (int i = 0; i < nx; ++i) G += gx[i] * Bx.col(i).transpose();
  for (int j = 0; j < ny; ++j) {
    Eigen::VectorXd v = gy[j];
    for (int i = 0; i < nx; ++i) v -= C(i, j) * Bx.col(i);
    G += By.col(j) * v.transpose();
  }

  // Subtract L g from the right-hand side in coefficient space.
  const int d = deriv_order(spec.equation);
  Eigen::MatrixXd Gm = Eigen::MatrixXd::Zero(m, m);
  Gm.topLeftCorner(n, n) = G;
  BandedMatrix S = conv_chain(d, m), D = diff_op(d, m);
  BandedLU Sf(S);
  Eigen::MatrixXd Lg = band_solve(Sf, D.apply(Gm), SolveSide::Left);
  Lg += band_solve(Sf, D.apply(Gm.transpose()), SolveSide::Left).transpose();
  if (spec.equation == EquationKind::Separable) {
    if (spec.rho2) Lg += mult_op(rho_coeffs(spec.rho2, m), m).apply(Gm);
    if (spec.rho1) Lg += mult_op(rho_coeffs(spec.rho1, m), m).apply(Gm.transpose()).transpose();
  }
  out.rhs_modified.coeffs -= Lg;
  return out;
}

SylvesterSystem assemble(const ProblemSpec& spec, int n, const Eigen::MatrixXd& rhs_cheb) {
  const int d = deriv_order(spec.equation);
  const int m = n + 16;
  if (rhs_cheb.rows() < n + d || rhs_cheb.cols() < n + d)
    throw DimensionError("assemble: right-hand side coefficients too small for truncation");

  std::vector<BoundarySpec> cx = direction_constraints(spec, spec.left, spec.right);
  std::vector<BoundarySpec> cy = direction_constraints(spec, spec.bottom, spec.top);
  TransformOp Tx = build_transform(cx, m, ScalingRule::DiagonalUnity, d);
  TransformOp Ty = build_transform(cy, m, ScalingRule::DiagonalUnity, d);

  BandedMatrix S = conv_chain(d, m);
  BandedMatrix mass_y = band_matmul(S, Ty.matrix);
  BandedMatrix mass_x = band_matmul(S, Tx.matrix);
  BandedMatrix stiff_y = stiffness_block(spec, Ty, spec.rho2, m);
  BandedMatrix stiff_x = stiffness_block(spec, Tx, spec.rho1, m);

  SylvesterSystem sys;
  sys.A1 = mass_y.truncated(n, n);
  sys.A2 = stiff_y.truncated(n, n);
  sys.B1 = mass_x.truncated(n, n).transpose();
  sys.B2 = stiff_x.truncated(n, n).transpose();

  // Back transforms kept tall so X = T Xtil T^T is exact in degree.
  sys.transform_y = Ty;
  sys.transform_y.matrix = Ty.matrix.truncated(n + d, n);
  sys.transform_x = Tx;
  sys.transform_x.matrix = Tx.matrix.truncated(n + d, n);

  // F = S_y * RHS * S_x^T, truncated.
  Eigen::MatrixXd Rm = Eigen::MatrixXd::Zero(m, m);
  int rr = std::min<int>(m, int(rhs_cheb.rows())), rc = std::min<int>(m, int(rhs_cheb.cols()));
  Rm.topLeftCorner(rr, rc) = rhs_cheb.topLeftCorner(rr, rc);
  Eigen::MatrixXd F = S.apply(Rm);
  F = S.apply(F.transpose()).transpose();
  sys.F = F.topLeftCorner(n, n);

  sys.symmetric = spec.equation == EquationKind::Poisson && same_bc(cx[0], cy[0]) &&
                  same_bc(cx[1], cy[1]);
  return sys;
}

IntervalPair spectral_intervals(const ProblemSpec& spec, const SylvesterSystem& sys, int n) {
  auto op_interval = [&](const std::function<double(double)>& rho, const BandedMatrix& stiff,
                         const BandedMatrix& mass,
                         const std::vector<BoundarySpec>& cs) -> SpectralInterval {
    bool dirichlet_pair = cs.size() == 2 && cs[0].kind == BCKind::Dirichlet &&
                          cs[1].kind == BCKind::Dirichlet;
    if (spec.equation == EquationKind::Poisson && dirichlet_pair) return dirichlet2_bounds(n + 1);
    if (spec.equation == EquationKind::Separable && dirichlet_pair) {
      SpectralInterval base = dirichlet2_bounds(n + 1);
      if (!rho) return base;
      auto [rlo, rhi] = rho_range(rho);
      return shifted_interval(base, {-rhi, -rlo});
    }
    if (spec.equation == EquationKind::FourthOrder)
      // The truncated clamped fourth-order pencil carries complex conjugate
      // pairs at its large end, so power iteration oscillates there; the
      // norm enclosure is loose but always valid.
      return modulus_interval(stiff, mass);
    return empirical_interval(stiff, mass, 20000);
  };

  std::vector<BoundarySpec> cx = direction_constraints(spec, spec.left, spec.right);
  std::vector<BoundarySpec> cy = direction_constraints(spec, spec.bottom, spec.top);
  SpectralInterval oy = op_interval(spec.rho2, sys.A2, sys.A1, cy);
  SpectralInterval ox =
      op_interval(spec.rho1, sys.B2.transpose(), sys.B1.transpose(), cx);

  IntervalPair ip;
  ip.ab = reciprocal_interval(oy);
  SpectralInterval rx = reciprocal_interval(ox);
  ip.cd = SpectralInterval{-rx.hi, -rx.lo, true};
  return ip;
}

AutoResult solve_auto(const ProblemSpec& spec) {
  if (!(spec.tolerance > 1e-15 && spec.tolerance < 1.0))
    throw InvalidArgumentError("solve_auto: tolerance must lie in (1e-15, 1)");
  if (spec.max_n < 16 || (spec.max_n & (spec.max_n - 1)) != 0)
    throw InvalidArgumentError("solve_auto: max_n must be a power of two >= 16");

  AutoResult result;
  Eigen::MatrixXd Xtil_prev;
  bool first = true;
  for (int n = 16;; n *= 2) {
    Lifting lift = lift_boundary(spec, n);
    SylvesterSystem sys = assemble(spec, n, lift.rhs_modified.coeffs);

    LevelInfo li;
    li.n = n;
    Eigen::MatrixXd Xtil;
    if (spec.solver == SolverChoice::Oracle) {
      if (n > 64)
        throw UnresolvedError("solve_auto: oracle solver unresolved at its size cap n = 64");
      Xtil = kron_solve(sys);
      li.report.terminated_by = Termination::Tolerance;
    } else {
      li.intervals = spectral_intervals(spec, sys, n);
      double gamma = cross_ratio_gamma(li.intervals.ab.lo, li.intervals.ab.hi,
                                       li.intervals.cd.lo, li.intervals.cd.hi);
      int k = shift_count(gamma, spec.tolerance);
      li.shift_count = k;
      // Warm-restarted levels prefer shifts in descending order; a zero start
      // (first level, and every fADI level) prefers ascending.
      ShiftOrder order =
          (first || spec.solver == SolverChoice::Fadi) ? ShiftOrder::Ascending
                                                       : ShiftOrder::Descending;
      ShiftSchedule sched = shifts(li.intervals.ab.lo, li.intervals.ab.hi, li.intervals.cd.lo,
                                   li.intervals.cd.hi, k, order);
      if (spec.solver == SolverChoice::Fadi) {
        SylvesterSystem lowsys = sys;
        lowsys.F_lowrank = cross_approximate(sys.F, 1e-15);
        auto [sol, rep] = fadi_solve(lowsys, sched, spec.tolerance, spec.tau);
        Xtil = sol.reconstruct();
        li.report = rep;
      } else {
        Eigen::MatrixXd X0 = first ? Eigen::MatrixXd() : warm_restart(Xtil_prev, n);
        auto [X, rep] = adi_solve(sys, sched, X0, spec.tolerance, spec.tau);
        Xtil = X;
        li.report = rep;
      }
    }

    // Back to the Chebyshev basis and add the lifting.
    Eigen::MatrixXd Xc = sys.transform_y.matrix.apply(Xtil);
    Xc = sys.transform_x.matrix.apply(Xc.transpose()).transpose();
    Cheb2D u;
    u.coeffs = Xc;
    u.coeffs.topLeftCorner(lift.g.rows(), lift.g.cols()) += lift.g.coeffs;

    li.resolved = is_resolved(u, spec.tolerance);
    result.levels.push_back(li);
    if (li.resolved) {
      result.u = u;
      return result;
    }
    if (n >= spec.max_n)
      throw UnresolvedError("solve_auto: unresolved at max_n = " + std::to_string(spec.max_n));
    Xtil_prev = Xtil;
    first = false;
  }
}

}  // namespace usp
