#pragma once

#include <Eigen/Dense>

#include "usp/adi.hpp"
#include "usp/banded.hpp"
#include "usp/zolotarev.hpp"

namespace usp {

// Dense Kronecker solve of (B2^T (x) A1 + B1^T (x) A2) vec(X) = vec(F).
// Refuses n > 64.
Eigen::MatrixXd kron_solve(const SylvesterSystem& sys);

enum class WhichEig { LargestMagnitude, SmallestMagnitude };

// Dominant (or inverse-dominant) real eigenvalue of A2^{-1} A1 by power
// iteration with banded solves; deterministic alternating-sign start,
// relative tolerance 1e-8. Refuses n > 512.
double extreme_eigs(const BandedMatrix& A1, const BandedMatrix& A2, WhichEig which,
                    int max_iters = 20000);

// Exact scalar ADI error factor prod (lam - q_j)(mu - p_j) / ((lam - p_j)(mu - q_j)).
double scalar_adi(double lam, double mu, const ShiftSchedule& shifts);

}  // namespace usp
