#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "usp/adi.hpp"
#include "usp/oracle.hpp"
#include "usp/poisson.hpp"
#include "usp/zolotarev.hpp"

using namespace usp;

namespace {

BandedMatrix diag_banded(const Eigen::VectorXd& d) {
  BandedMatrix B(int(d.size()), int(d.size()), 0, 0);
  for (int i = 0; i < d.size(); ++i) B.at(i, i) = d[i];
  return B;
}

// Assembled Dirichlet Poisson system with a random polynomial right-hand side.
SylvesterSystem dirichlet_system(int n, std::mt19937& rng) {
  ProblemSpec spec;
  spec.rhs = [](double, double) { return 0.0; };  // replaced below
  Eigen::MatrixXd C = testor::random_coeffs(6, 6, rng);
  spec.rhs = [C](double x, double y) { return testor::direct_eval(C, x, y); };
  auto lift = lift_boundary(spec, n);
  return assemble(spec, n, lift.rhs_modified.coeffs);
}

ShiftSchedule system_shifts(const ProblemSpec& spec, const SylvesterSystem& sys, int n, int k,
                            ShiftOrder order = ShiftOrder::Ascending) {
  IntervalPair ip = spectral_intervals(spec, sys, n);
  return shifts(ip.ab.lo, ip.ab.hi, ip.cd.lo, ip.cd.hi, k, order);
}

}  // namespace

TEST_CASE("zero right-hand side gives zero after one check") {
  std::mt19937 rng(2);
  ProblemSpec spec;
  spec.rhs = [](double, double) { return 0.0; };
  auto lift = lift_boundary(spec, 16);
  SylvesterSystem sys = assemble(spec, 16, lift.rhs_modified.coeffs);
  IntervalPair ip = spectral_intervals(spec, sys, 16);
  ShiftSchedule sc = shifts(ip.ab.lo, ip.ab.hi, ip.cd.lo, ip.cd.hi, 5);
  auto [X, rep] = adi_solve(sys, sc, Eigen::MatrixXd(), 1e-12, 1);
  CHECK(X.cwiseAbs().maxCoeff() == 0.0);
  CHECK(rep.iterations_run == 1);
  CHECK(rep.terminated_by == Termination::Tolerance);
  (void)rng;
}

TEST_CASE("scalar error law on diagonal surrogates") {
  // A1 = Lambda, A2 = I, B1 = Mu, B2 = I: after k full steps the error is
  // exactly the scalar product formula entrywise.
  int n = 12;
  Eigen::VectorXd lam(n), nu(n);
  for (int i = 0; i < n; ++i) {
    lam[i] = -4.0 + 3.0 * i / (n - 1);  // p-side spectrum in [a,b] = [-4,-1]
    nu[i] = 1.0 + 3.0 * i / (n - 1);    // q-side spectrum in [c,d] = [1,4]
  }
  SylvesterSystem sys;
  sys.A1 = diag_banded(lam);
  sys.A2 = BandedMatrix::identity(n);
  sys.B1 = diag_banded(-nu);  // -B1 B2^{-1} has spectrum nu
  sys.B2 = BandedMatrix::identity(n);
  std::mt19937 rng(7);
  sys.F = testor::random_coeffs(n, n, rng);
  // Lambda X - X N = F, so X_ij = F_ij / (lam_i - nu_j).
  Eigen::MatrixXd Xexact(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Xexact(i, j) = sys.F(i, j) / (lam[i] - nu[j]);

  for (int k : {1, 3, 7}) {
    ShiftSchedule sc = shifts(-4, -1, 1, 4, k);
    auto [X, rep] = adi_solve(sys, sc, Eigen::MatrixXd(), 1e-30, k + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double predicted = scalar_adi(lam[i], nu[j], sc) * (0.0 - Xexact(i, j));
        CHECK(X(i, j) - Xexact(i, j) == doctest::Approx(predicted).epsilon(1e-13));
      }
  }
}

TEST_CASE("oracle equivalence across boundary conditions and sizes") {
  std::mt19937 rng(11);
  auto bc_robin = BoundarySpec{Side::Right, BCKind::Robin, 1.0};
  auto bc_neumann = BoundarySpec{Side::Right, BCKind::Neumann, 0.0};
  for (int variant = 0; variant < 3; ++variant) {
    for (int n : {8, 16, 32}) {
      ProblemSpec spec;
      Eigen::MatrixXd C = testor::random_coeffs(5, 5, rng);
      spec.rhs = [C](double x, double y) { return testor::direct_eval(C, x, y); };
      if (variant == 1) spec.right.bc = bc_neumann, spec.top.bc = bc_neumann;
      if (variant == 2) spec.right.bc = bc_robin, spec.top.bc = bc_robin;
      auto lift = lift_boundary(spec, n);
      SylvesterSystem sys = assemble(spec, n, lift.rhs_modified.coeffs);
      Eigen::MatrixXd Xref = kron_solve(sys);
      int k = 40;
      ShiftSchedule sc = system_shifts(spec, sys, n, k);
      auto [X, rep] = adi_solve(sys, sc, Eigen::MatrixXd(), 1e-13, 10);
      CHECK((X - Xref).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("fadi matches adi and reconstructs the same solution") {
  std::mt19937 rng(17);
  int n = 16;
  ProblemSpec spec;
  Eigen::VectorXd u = Eigen::VectorXd::Random(6), v = Eigen::VectorXd::Random(6);
  Eigen::MatrixXd C = u * v.transpose();  // rank-1 coefficient RHS
  spec.rhs = [C](double x, double y) { return testor::direct_eval(C, x, y); };
  auto lift = lift_boundary(spec, n);
  SylvesterSystem sys = assemble(spec, n, lift.rhs_modified.coeffs);
  sys.F_lowrank = cross_approximate(sys.F, 1e-15);
  CHECK(sys.F_lowrank->rank() <= 2);

  int k = 25;
  ShiftSchedule sc = system_shifts(spec, sys, n, k);
  auto [Xa, ra] = adi_solve(sys, sc, Eigen::MatrixXd(), 1e-30, 1);
  auto [lr, rf] = fadi_solve(sys, sc, 1e-30, 1);
  Eigen::MatrixXd Xf = lr.reconstruct();
  CHECK((Xf - Xa).cwiseAbs().maxCoeff() <= 1e-11);

  // Increment identity, step by step at cadence 1.
  REQUIRE(ra.increment_history.size() == rf.increment_history.size());
  for (size_t i = 0; i < ra.increment_history.size(); ++i) {
    CHECK(ra.increment_history[i].first == rf.increment_history[i].first);
    double da = ra.increment_history[i].second, df = rf.increment_history[i].second;
    CHECK(std::abs(da - df) <= 1e-11 * std::max(1.0, std::max(da, df)) + 1e-11);
    if (da < 1e-12) break;  // past the roundoff plateau the histories may drift
  }

  // Full-rank warning path still yields the oracle answer at n = 8.
  int n8 = 8;
  ProblemSpec spec8;
  Eigen::MatrixXd C8 = testor::random_coeffs(8, 8, rng);
  spec8.rhs = [C8](double x, double y) { return testor::direct_eval(C8, x, y); };
  auto lift8 = lift_boundary(spec8, n8);
  SylvesterSystem sys8 = assemble(spec8, n8, lift8.rhs_modified.coeffs);
  sys8.F_lowrank = cross_approximate(sys8.F, 1e-15);
  ShiftSchedule sc8 = system_shifts(spec8, sys8, n8, 30);
  auto [lr8, r8] = fadi_solve(sys8, sc8, 1e-13, 10);
  CHECK((lr8.reconstruct() - kron_solve(sys8)).cwiseAbs().maxCoeff() <= 1e-9);

  // Zero low-rank right-hand side.
  SylvesterSystem sysz = sys;
  sysz.F.setZero();
  sysz.F_lowrank = cross_approximate(sysz.F, 1e-15);
  auto [lrz, rz] = fadi_solve(sysz, sc, 1e-12, 1);
  CHECK(lrz.reconstruct().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("warm restart") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(16, 16);
  Eigen::MatrixXd P = warm_restart(X, 32);
  CHECK(P.rows() == 32);
  CHECK((P.topLeftCorner(16, 16) - X).cwiseAbs().maxCoeff() == 0.0);
  CHECK(P.bottomRows(16).cwiseAbs().maxCoeff() == 0.0);
  CHECK((warm_restart(X, 16) - X).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(warm_restart(X, 8), DimensionError);

  // On a smooth problem the warm start's first-check increment is below the
  // zero start's at the doubled size.
  ProblemSpec spec;
  spec.rhs = [](double x, double y) {
    return 10 * std::exp(2 * x) * std::cos(2 * y) * 0.0 + std::exp(x) * std::cos(2 * y);
  };
  int n1 = 64, n2 = 128;
  auto l1 = lift_boundary(spec, n1);
  SylvesterSystem s1 = assemble(spec, n1, l1.rhs_modified.coeffs);
  ShiftSchedule c1 = system_shifts(spec, s1, n1, 30);
  auto [X1, r1] = adi_solve(s1, c1, Eigen::MatrixXd(), 1e-13, 10);

  auto l2 = lift_boundary(spec, n2);
  SylvesterSystem s2 = assemble(spec, n2, l2.rhs_modified.coeffs);
  ShiftSchedule c2 = system_shifts(spec, s2, n2, 30, ShiftOrder::Descending);
  auto [Xw, rw] = adi_solve(s2, c2, warm_restart(X1, n2), 1e-13, 10);
  auto [Xz, rz] = adi_solve(s2, c2, Eigen::MatrixXd(), 1e-13, 10);
  REQUIRE(!rw.increment_history.empty());
  REQUIRE(!rz.increment_history.empty());
  CHECK(rw.increment_history[0].second < rz.increment_history[0].second);
}

TEST_CASE("cross approximation") {
  std::mt19937 rng(29);
  Eigen::MatrixXd U = Eigen::MatrixXd::Random(20, 3), V = Eigen::MatrixXd::Random(20, 3);
  Eigen::MatrixXd F = U * V.transpose();
  LowRankRHS lr = cross_approximate(F, 1e-14);
  CHECK(lr.rank() <= 4);
  CHECK((lr.U * lr.V.transpose() - F).cwiseAbs().maxCoeff() <= 1e-12 * F.cwiseAbs().maxCoeff());
  (void)rng;
}
