#pragma once

#include <Eigen/Dense>

#include "bguard/rank_tolerance.hpp"
#include "bguard/types.hpp"

namespace bguard {

/// Block-Hankel arrangement of offline data: block-row r, column c holds
/// w_d(r + c - 1). Immutable after construction.
struct HankelMatrix {
    MatrixXd entries;  // qL x (T - L + 1)
    int q = 0;
    int L = 0;
    int T = 0;

    int rows() const { return q * L; }
    int cols() const { return T - L + 1; }
};

HankelMatrix build_hankel(const Trajectory& w_d, int L);

struct RankReport {
    int rank = 0;
    VectorXd singular_values;
};

RankReport numerical_rank(const MatrixXd& M, const RankTolerance& tol = {});

struct GpeReport {
    bool holds = false;
    int rank = 0;
    int target = 0;       // m*L + n
    double gap_ratio = 0;  // sigma_target / sigma_{target+1}; inf past the spectrum
};

/// Generalized persistency of excitation: rank H = m*L + n.
/// Throws when the target exceeds min(qL, T-L+1) (the condition can never hold).
GpeReport check_gpe(const HankelMatrix& H, int m, int n, const RankTolerance& tol = {});

MatrixXd restrict_rows(const MatrixXd& M, const IndexSet& I);
MatrixXd restrict_rows(const HankelMatrix& H, const IndexSet& I);
VectorXd restrict_entries(const VectorXd& v, const IndexSet& I);

}  // namespace bguard
