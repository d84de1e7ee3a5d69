#include "bguard/recover_convex.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <vector>

#include "bguard/conditions.hpp"
#include "bguard/rank_tolerance.hpp"

namespace bguard {
namespace {

using Clock = std::chrono::steady_clock;

void check_shape(const HankelMatrix& H, const Trajectory& w) {
    if (w.q != H.q || w.length() != H.L)
        throw ContractViolation("convex recovery: trajectory shape != (q, L)");
}

// Final bi-level stage: least squares on the kept rows. Returns no_solution
// when dropping leaves fewer rows than rank(H) (underdetermined fit).
RecoveryResult refit_on(const HankelMatrix& H, const VectorXd& w_stacked, const IndexSet& keep,
                        int k_used) {
    RecoveryResult res;
    res.k_used = k_used;
    res.selected = keep;
    const int rank = numerical_rank(H.entries).rank;
    if (keep.size() < rank) {
        res.status = RecoveryStatus::no_solution;
        return res;
    }
    const MatrixXd H_I = restrict_rows(H, keep);
    const VectorXd w_I = restrict_entries(w_stacked, keep);
    res.g = optim::least_squares_min_norm(H_I, w_I);
    res.w_tilde = Trajectory::from_stacked(H.q, H.entries * res.g);
    res.residual = (w_I - H_I * res.g).norm();
    res.per_entry_residuals = (w_stacked - H.entries * res.g).cwiseAbs();
    res.status = RecoveryStatus::recovered;
    return res;
}

}  // namespace

RecoveryResult recover_l1(const HankelMatrix& H, const Trajectory& w, const SolverOpts& opt) {
    check_shape(H, w);
    const auto t0 = Clock::now();
    const int rows = H.rows();
    const VectorXd w_stacked = w.stacked();

    // Work with the image of H in orthonormal coordinates so nothing below
    // depends on the Hankel's conditioning. The l1 fit only constrains the
    // residual through the image's orthogonal complement:
    //   min ||w - Hg||_1  ==  min ||r||_1 s.t. V'r = V'w,  V = complement,
    // a tiny exact dual (dim = rows - rank); the general LP is the fallback.
    Eigen::JacobiSVD<MatrixXd> svd(H.entries, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const RankTolerance policy;
    const double cutoff =
        policy.cutoff(H.entries.rows(), H.entries.cols(), svd.singularValues()[0]);
    int r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()[r] > cutoff) ++r;
    const MatrixXd U = svd.matrixU().leftCols(r);
    const MatrixXd V_perp = svd.matrixU().rightCols(rows - r);

    VectorXd residual_l1;
    const auto fast = optim::min_l1_equality(V_perp, w_stacked);
    if (fast.ok) {
        residual_l1 = fast.r;
    } else {
        // min 1't  s.t.  -t <= w - Uz <= t; variables [z; t], t >= 0.
        optim::LPProblem lp;
        const int n = r + rows;
        lp.c = VectorXd::Zero(n);
        lp.c.tail(rows).setOnes();
        lp.A_in = MatrixXd::Zero(2 * rows, n);
        lp.b_in = VectorXd::Zero(2 * rows);
        lp.A_in.block(0, 0, rows, r) = -U;
        lp.A_in.block(0, r, rows, rows) = -MatrixXd::Identity(rows, rows);
        lp.b_in.head(rows) = -w_stacked;
        lp.A_in.block(rows, 0, rows, r) = U;
        lp.A_in.block(rows, r, rows, rows) = -MatrixXd::Identity(rows, rows);
        lp.b_in.tail(rows) = w_stacked;
        lp.lb = VectorXd::Constant(n, -optim::kInf);
        lp.lb.tail(rows).setZero();

        const auto sol = optim::solve_lp(lp, opt.lp);
        if (sol.status != optim::LPStatus::optimal)
            throw SolverFailure("recover_l1: LP solver failed (status " +
                                std::to_string(static_cast<int>(sol.status)) + ", gap " +
                                std::to_string(sol.gap) + ")");
        residual_l1 = w_stacked - U * sol.x.head(r);
    }

    RecoveryResult res;
    // Min-norm g reproducing the optimal trajectory w - r.
    res.g = svd.matrixV().leftCols(r) *
            ((U.transpose() * (w_stacked - residual_l1)).array() /
             svd.singularValues().head(r).array())
                .matrix();
    res.w_tilde = Trajectory::from_stacked(H.q, H.entries * res.g);
    res.selected = IndexSet::full(rows);
    res.per_entry_residuals = (w_stacked - H.entries * res.g).cwiseAbs();
    res.residual = res.per_entry_residuals.norm();
    res.status = RecoveryStatus::recovered;
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

RecoveryResult recover_group_lasso(const HankelMatrix& H, const Trajectory& w,
                                   const SolverOpts& opt) {
    check_shape(H, w);
    const auto t0 = Clock::now();
    const optim::GroupPartition partition(H.q, H.L);
    const auto sol = optim::solve_group_splitting(H.entries, w.stacked(), partition, opt.split);
    if (sol.status != optim::SplitStatus::converged)
        throw SolverFailure("recover_group_lasso: splitting solver hit its iteration cap "
                            "(primal residual " + std::to_string(sol.primal_residual) + ")");

    RecoveryResult res;
    res.g = sol.g;
    res.w_tilde = Trajectory::from_stacked(H.q, H.entries * res.g);
    res.selected = IndexSet::full(H.rows());
    const VectorXd r = w.stacked() - H.entries * res.g;
    res.per_entry_residuals = r.cwiseAbs();
    res.residual = r.norm();
    res.group_norms.resize(H.q);
    for (int i = 0; i < H.q; ++i) {
        double sq = 0.0;
        for (int idx : partition.groups[i]) sq += r[to0(idx)] * r[to0(idx)];
        res.group_norms[i] = std::sqrt(sq);
    }
    res.status = RecoveryStatus::recovered;
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

RecoveryResult recover_noisy_entries(const HankelMatrix& H, const Trajectory& w, int k,
                                     const SolverOpts& opt) {
    check_shape(H, w);
    if (k < 0 || k > H.rows()) throw ContractViolation("recover_noisy_entries: k out of range");
    const auto t0 = Clock::now();
    const RecoveryResult stage1 = recover_l1(H, w, opt);

    // Top-k residual entries, ties broken by smaller index.
    std::vector<int> order(H.rows());
    std::iota(order.begin(), order.end(), 1);
    const VectorXd& r = stage1.per_entry_residuals;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return r[to0(a)] > r[to0(b)]; });
    std::vector<int> dropped(order.begin(), order.begin() + k);
    const IndexSet keep = IndexSet(std::move(dropped), H.rows()).complement();

    RecoveryResult res = refit_on(H, w.stacked(), keep, k);
    res.subproblems_tried = 1;
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

RecoveryResult recover_noisy_channels(const HankelMatrix& H, const Trajectory& w, int k,
                                      const SolverOpts& opt) {
    check_shape(H, w);
    if (k < 0 || k > H.q) throw ContractViolation("recover_noisy_channels: k out of range");
    const auto t0 = Clock::now();
    const RecoveryResult stage1 = recover_group_lasso(H, w, opt);

    std::vector<int> order(H.q);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return stage1.group_norms[to0(a)] > stage1.group_norms[to0(b)];
    });
    std::vector<int> dropped_channels(order.begin(), order.begin() + k);
    const IndexSet keep =
        periodical_set(IndexSet(std::move(dropped_channels), H.q), H.q, H.L).complement();

    RecoveryResult res = refit_on(H, w.stacked(), keep, k);
    res.group_norms = stage1.group_norms;
    res.subproblems_tried = 1;
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

}  // namespace bguard
