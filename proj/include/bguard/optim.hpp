#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "bguard/types.hpp"

namespace bguard::optim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x  s.t.  A_eq x = b_eq,  A_in x <= b_in,  lb <= x <= ub.
/// Empty matrices / vectors mean "no such constraints"; bounds default free.
struct LPProblem {
    VectorXd c;
    MatrixXd A_eq;
    VectorXd b_eq;
    MatrixXd A_in;
    VectorXd b_in;
    VectorXd lb;  // empty => all -inf
    VectorXd ub;  // empty => all +inf
};

enum class LPStatus { optimal, infeasible, unbounded, iteration_cap };

struct LPSolution {
    VectorXd x;
    double objective = 0.0;
    VectorXd dual_eq;       // multipliers of A_eq rows
    VectorXd dual_in;       // multipliers of A_in rows (<= 0 for active rows)
    LPStatus status = LPStatus::iteration_cap;
    int iterations = 0;
    double gap = kInf;      // relative duality gap at exit
    bool used_simplex_fallback = false;
};

struct LPOptions {
    double tol = 1e-9;
    int max_iter = 200;
};

/// Dense primal-dual interior point (predictor-corrector); falls back to a
/// two-phase simplex with Bland pivoting when the iterates degrade.
LPSolution solve_lp(const LPProblem& p, const LPOptions& opt = {});

/// Minimum-2-norm minimizer of ||Ax - b||_2 (SVD pseudoinverse with the
/// shared rank tolerance policy).
VectorXd least_squares_min_norm(const MatrixXd& A, const VectorXd& b);

struct L1EqualityResult {
    VectorXd r;
    double objective = kInf;
    bool ok = false;
};

/// min ||r||_1  s.t.  V'r = V'w, with V (rows x f, f small) having orthonormal
/// columns. Solved exactly through the f-dimensional dual max (V'w)'y over
/// ||V y||_inf <= 1 by vertex walking; ok=false means the caller should use
/// the general solver instead.
L1EqualityResult min_l1_equality(const MatrixXd& V, const VectorXd& w);

/// q disjoint size-L groups covering {1..qL}: group i = {i, i+q, ..., i+(L-1)q}.
struct GroupPartition {
    int q = 0;
    int L = 0;
    GroupPartition(int q, int L);
    std::vector<std::vector<int>> groups;  // 1-based row indices
};

enum class SplitStatus { converged, iteration_cap };

struct SplitResult {
    VectorXd g;
    VectorXd beta;
    SplitStatus status = SplitStatus::iteration_cap;
    int iterations = 0;
    double primal_residual = kInf;
    double dual_residual = kInf;
    double objective = kInf;
};

struct SplitOptions {
    double tol = 1e-8;
    int max_iter = 10000;
    double rho = 1.0;  // initial penalty; adapted by residual balancing
};

/// Operator splitting (scaled-dual ADMM) for
///   min sum_i ||beta|_{group i}||_2  s.t.  beta = w - H g.
SplitResult solve_group_splitting(const MatrixXd& H, const VectorXd& w,
                                  const GroupPartition& partition,
                                  const SplitOptions& opt = {});

double group_objective(const VectorXd& beta, const GroupPartition& partition);

}  // namespace bguard::optim
