#include "bguard/recover_exact.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>

#include "bguard/combinatorics.hpp"
#include "bguard/conditions.hpp"
#include "bguard/optim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bguard {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Maps the i-th removal candidate to the rows it removes.
struct SubsetScheme {
    int universe;          // qL for entries, q for channels
    int k;                 // removed per candidate
    const HankelMatrix* H;
    bool channel;

    std::int64_t total() const { return binomial(universe, k); }

    IndexSet kept_rows(std::int64_t i) const {
        const std::vector<int> removed = combination_unrank(universe, k, i);
        if (channel)
            return periodical_set(IndexSet(removed, universe), H->q, H->L).complement();
        return IndexSet(removed, universe).complement();
    }
};

bool try_subset(const SubsetScheme& scheme, const VectorXd& w_stacked, std::int64_t i,
                double tol) {
    const IndexSet keep = scheme.kept_rows(i);
    if (keep.empty()) return false;
    const MatrixXd H_I = restrict_rows(*scheme.H, keep);
    const VectorXd w_I = restrict_entries(w_stacked, keep);
    return consistent_solve(H_I, w_I, tol).has_value();
}

// Serial reference kernel: scan candidates in order, stop at the first hit.
std::int64_t scan_serial(const SubsetScheme& scheme, const VectorXd& w_stacked,
                         std::int64_t total, double tol, long long& tried) {
    for (std::int64_t i = 0; i < total; ++i) {
        ++tried;
        if (try_subset(scheme, w_stacked, i, tol)) return i;
    }
    return -1;
}

// OpenMP kernel. Candidates are independent; the deterministic winner is the
// smallest successful index, so threads shrink a shared bound and skip past it.
std::int64_t scan_parallel(const SubsetScheme& scheme, const VectorXd& w_stacked,
                           std::int64_t total, double tol, long long& tried) {
    std::atomic<std::int64_t> best{std::numeric_limits<std::int64_t>::max()};
    std::atomic<long long> count{0};
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < total; ++i) {
        if (i >= best.load(std::memory_order_relaxed)) continue;
        count.fetch_add(1, std::memory_order_relaxed);
        if (try_subset(scheme, w_stacked, i, tol)) {
            std::int64_t cur = best.load(std::memory_order_relaxed);
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
        }
    }
    tried = count.load();
    const std::int64_t found = best.load();
    return (found == std::numeric_limits<std::int64_t>::max()) ? -1 : found;
}

RecoveryResult run_bruteforce(const HankelMatrix& H, const Trajectory& w, int k, bool channel,
                              const RecoverOptions& opt) {
    if (w.q != H.q || w.length() != H.L)
        throw ContractViolation("bruteforce recovery: trajectory shape != (q, L)");
    const int universe = channel ? H.q : H.rows();
    if (k < 0 || k > universe) throw ContractViolation("bruteforce recovery: k out of range");

    const auto t0 = Clock::now();
    RecoveryResult res;
    const VectorXd w_stacked = w.stacked();
    const SubsetScheme scheme{universe, k, &H, channel};
    const std::int64_t total = scheme.total();
    if (total > opt.max_subproblems) {
        res.status = RecoveryStatus::budget_exceeded;
        res.wall_time_s = seconds_since(t0);
        return res;
    }

    long long tried = 0;
    const std::int64_t hit = opt.parallel
                                 ? scan_parallel(scheme, w_stacked, total, opt.tol, tried)
                                 : scan_serial(scheme, w_stacked, total, opt.tol, tried);
    res.subproblems_tried = tried;
    if (hit < 0) {
        res.status = RecoveryStatus::no_solution;
        res.wall_time_s = seconds_since(t0);
        return res;
    }

    const IndexSet keep = scheme.kept_rows(hit);
    const MatrixXd H_I = restrict_rows(H, keep);
    const VectorXd w_I = restrict_entries(w_stacked, keep);
    const VectorXd g = *consistent_solve(H_I, w_I, opt.tol);
    res.g = g;
    res.selected = keep;
    res.w_tilde = Trajectory::from_stacked(H.q, H.entries * g);
    res.residual = (w_I - H_I * g).norm();
    res.status = RecoveryStatus::recovered;
    res.wall_time_s = seconds_since(t0);
    return res;
}

}  // namespace

std::optional<VectorXd> consistent_solve(const MatrixXd& H_I, const VectorXd& w_I, double tol) {
    const VectorXd g = optim::least_squares_min_norm(H_I, w_I);
    const double residual = (H_I * g - w_I).norm();
    if (residual <= tol * (1.0 + w_I.norm())) return g;
    return std::nullopt;
}

RecoveryResult recover_entries_bruteforce(const HankelMatrix& H, const Trajectory& w, int k,
                                          const RecoverOptions& opt) {
    return run_bruteforce(H, w, k, /*channel=*/false, opt);
}

RecoveryResult recover_channels_bruteforce(const HankelMatrix& H, const Trajectory& w, int k,
                                           const RecoverOptions& opt) {
    return run_bruteforce(H, w, k, /*channel=*/true, opt);
}

RecoveryResult recover_adaptive(const HankelMatrix& H, const Trajectory& w, int k_max,
                                AttackKind kind, const RecoverOptions& opt) {
    const auto t0 = Clock::now();
    long long tried = 0;
    for (int kb = 0; kb <= k_max; ++kb) {
        RecoveryResult res = (kind == AttackKind::entry)
                                 ? recover_entries_bruteforce(H, w, kb, opt)
                                 : recover_channels_bruteforce(H, w, kb, opt);
        tried += res.subproblems_tried;
        if (res.status != RecoveryStatus::no_solution) {
            res.k_used = kb;
            res.subproblems_tried = tried;
            res.wall_time_s = seconds_since(t0);
            return res;
        }
    }
    RecoveryResult res;
    res.status = RecoveryStatus::no_solution;
    res.subproblems_tried = tried;
    res.wall_time_s = seconds_since(t0);
    return res;
}

}  // namespace bguard
