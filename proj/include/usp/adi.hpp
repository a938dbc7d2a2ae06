#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "usp/banded.hpp"
#include "usp/errors.hpp"
#include "usp/recomb.hpp"
#include "usp/zolotarev.hpp"

namespace usp {

// Low-rank right-hand side F = U V^T.
struct LowRankRHS {
  Eigen::MatrixXd U;  // n x r
  Eigen::MatrixXd V;  // n x r
  int rank() const { return int(U.cols()); }
};

// A1 X B2 + A2 X B1 = F in the recombined basis.
struct SylvesterSystem {
  BandedMatrix A1, B1, A2, B2;
  Eigen::MatrixXd F;             // dense right-hand side (may be empty if low-rank given)
  std::optional<LowRankRHS> F_lowrank;
  TransformOp transform_x, transform_y;  // back transforms: X = T_y Xtil T_x^T
  bool symmetric = false;        // assembly declares A1 = B1^T, A2 = B2^T
  int n() const { return A1.rows(); }
};

// Factored solution X = Z diag(D) Y^T with D holding (q_j - p_j) replicated
// once per RHS column.
struct LowRankSolution {
  Eigen::MatrixXd Z;
  Eigen::MatrixXd Y;
  Eigen::VectorXd D;
  Eigen::MatrixXd reconstruct() const { return Z * D.asDiagonal() * Y.transpose(); }
};

enum class Termination { Tolerance, Stagnation, ScheduleExhausted };

struct SolveReport {
  int iterations_run = 0;
  std::vector<std::pair<int, double>> increment_history;  // (iteration, relative increment)
  Termination terminated_by = Termination::ScheduleExhausted;
  double wall_time = 0.0;  // seconds
};

std::string to_string(Termination t);

// Generalized ADI iteration. X0 empty means a zero start. Returns Xtil
// (recombined-basis coefficients) and the solve report. Relative increments
// are measured every tau iterations (and at the final iteration).
std::pair<Eigen::MatrixXd, SolveReport> adi_solve(const SylvesterSystem& sys,
                                                  const ShiftSchedule& shifts,
                                                  const Eigen::MatrixXd& X0, double eps,
                                                  int tau = 10);

// Factored ADI; requires sys.F_lowrank. Same stopping rule, with norms
// evaluated through Gram matrices of the factors.
std::pair<LowRankSolution, SolveReport> fadi_solve(const SylvesterSystem& sys,
                                                   const ShiftSchedule& shifts, double eps,
                                                   int tau = 10);

// Zero-pad an n1 x n1 iterate to n2 x n2 for use as a warm-start iterate.
Eigen::MatrixXd warm_restart(const Eigen::MatrixXd& Xprev, int n2);

// Greedy full-pivot adaptive cross approximation: F ~ U V^T with residual
// max-norm below rel_tol * max|F|. A zero F yields one pair of zero columns.
LowRankRHS cross_approximate(const Eigen::MatrixXd& F, double rel_tol);

}  // namespace usp
