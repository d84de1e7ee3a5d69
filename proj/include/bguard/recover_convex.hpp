#pragma once

#include "bguard/hankel.hpp"
#include "bguard/optim.hpp"
#include "bguard/recover_exact.hpp"

namespace bguard {

struct SolverOpts {
    optim::LPOptions lp;
    optim::SplitOptions split;
    double consistency_tol = 1e-8;
};

/// l1 relaxation: g* = argmin ||w - H g||_1, w* = H g*.
RecoveryResult recover_l1(const HankelMatrix& H, const Trajectory& w, const SolverOpts& opt = {});

/// Group LASSO over the q per-channel groups: min sum_i ||beta|_group_i||_2
/// s.t. beta = w - H g. Per-group norms flag the attacked channels.
RecoveryResult recover_group_lasso(const HankelMatrix& H, const Trajectory& w,
                                   const SolverOpts& opt = {});

/// Noisy bi-level recovery: l1 solve, drop the k largest absolute residuals
/// (ties to the smaller index), least-squares refit on the rest.
RecoveryResult recover_noisy_entries(const HankelMatrix& H, const Trajectory& w, int k,
                                     const SolverOpts& opt = {});

/// Channel variant: group-lasso solve, drop the k channels with the largest
/// group residual norms, refit on the remaining rows.
RecoveryResult recover_noisy_channels(const HankelMatrix& H, const Trajectory& w, int k,
                                      const SolverOpts& opt = {});

}  // namespace bguard
