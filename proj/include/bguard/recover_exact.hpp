#pragma once

#include <optional>

#include "bguard/hankel.hpp"
#include "bguard/types.hpp"

namespace bguard {

enum class RecoveryStatus { recovered, no_solution, budget_exceeded };
enum class AttackKind { entry, channel };

struct RecoveryResult {
    Trajectory w_tilde;
    VectorXd g;
    IndexSet selected;  // rows kept when solving
    RecoveryStatus status = RecoveryStatus::no_solution;
    double residual = 0.0;  // ||w|_selected - w_tilde|_selected||_2
    long long subproblems_tried = 0;
    double wall_time_s = 0.0;
    int k_used = -1;  // filled by recover_adaptive

    // Convex-recovery extras.
    VectorXd per_entry_residuals;
    VectorXd group_norms;
};

struct RecoverOptions {
    double tol = 1e-8;  // consistency: residual <= tol * (1 + ||w_I||_2)
    long long max_subproblems = 1'000'000;
    bool parallel = true;  // OpenMP subset scan; serial reference otherwise
};

/// Minimum-norm least-squares g when w_I is consistent with H_I (residual
/// form of the augmented-matrix rank test); nullopt otherwise.
std::optional<VectorXd> consistent_solve(const MatrixXd& H_I, const VectorXd& w_I, double tol);

/// Scan size-(qL-k) row subsets in lexicographic order of the removed
/// complement; first consistent solve wins, w_tilde = H g.
RecoveryResult recover_entries_bruteforce(const HankelMatrix& H, const Trajectory& w, int k,
                                          const RecoverOptions& opt = {});

/// Channel analogue over the C(q, k) channel selections.
RecoveryResult recover_channels_bruteforce(const HankelMatrix& H, const Trajectory& w, int k,
                                           const RecoverOptions& opt = {});

/// Try k_bar = 0, 1, ..., k_max; return the first success annotated with the
/// k_bar used, discarding no more data than necessary.
RecoveryResult recover_adaptive(const HankelMatrix& H, const Trajectory& w, int k_max,
                                AttackKind kind, const RecoverOptions& opt = {});

}  // namespace bguard
