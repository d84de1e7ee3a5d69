#include "bguard/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bguard/combinatorics.hpp"
#include "bguard/optim.hpp"

namespace bguard {
namespace {

// Complement of a sorted removal set, as a row IndexSet over `universe`.
IndexSet complement_of(const std::vector<int>& removed, int universe) {
    return IndexSet(removed, universe).complement();
}

// First (smallest cardinality, then lexicographic) subset of {1..universe}
// with cardinality in [1, max_card] whose removal drops rank(M) below
// base_rank. `expand` maps a candidate subset to the row set it removes.
template <typename Expand>
std::optional<IndexSet> find_min_dropping_set(const MatrixXd& M, int universe, int max_card,
                                              int base_rank, const SearchBudget& budget,
                                              long long& evaluations, Expand&& expand) {
    for (int card = 1; card <= max_card; ++card) {
        std::vector<int> comb(card);
        for (int i = 0; i < card; ++i) comb[i] = i + 1;
        do {
            if (++evaluations > budget.max_rank_evaluations)
                throw BudgetExceeded(
                    "critical-set search: rank evaluation budget exceeded; cardinality lower bound " +
                        std::to_string(card),
                    evaluations);
            const IndexSet rows_removed = expand(comb);
            const IndexSet keep = rows_removed.complement();
            const int r = keep.empty() ? 0 : numerical_rank(restrict_rows(M, keep)).rank;
            if (r < base_rank) return IndexSet(comb, universe);
        } while (next_combination(comb, universe));
    }
    return std::nullopt;
}

}  // namespace

IndexSet min_critical_row_set(const MatrixXd& M, const SearchBudget& budget) {
    if (M.size() == 0 || numerical_rank(M).rank == 0)
        throw ContractViolation("min_critical_row_set: matrix must be nonzero");
    const int rows = static_cast<int>(M.rows());
    const int base = numerical_rank(M).rank;
    long long evals = 0;
    auto found = find_min_dropping_set(M, rows, rows, base, budget, evals,
                                       [&](const std::vector<int>& comb) {
                                           return IndexSet(comb, rows);
                                       });
    // A nonzero matrix always loses rank once all rows are gone.
    return *found;
}

IndexSet periodical_set(const IndexSet& channels, int q, int L) {
    if (channels.universe != q) throw ContractViolation("periodical_set: universe != q");
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(channels.size()) * L);
    for (int i : channels.indices)
        for (int l = 0; l < L; ++l) rows.push_back(i + q * l);
    return IndexSet(std::move(rows), q * L);
}

IndexSet min_channel_critical_set(const HankelMatrix& H, const SearchBudget& budget) {
    const int base = numerical_rank(H.entries).rank;
    if (base == 0) throw ContractViolation("min_channel_critical_set: zero Hankel matrix");
    long long evals = 0;
    auto found = find_min_dropping_set(H.entries, H.q, H.q, base, budget, evals,
                                       [&](const std::vector<int>& comb) {
                                           return periodical_set(IndexSet(comb, H.q), H.q, H.L);
                                       });
    return *found;
}

namespace {

Certificate condition_cert(ConditionId id, const HankelMatrix& H, int k, int universe,
                           const SearchBudget& budget,
                           const std::function<IndexSet(const std::vector<int>&)>& expand) {
    if (k < 0) throw ContractViolation("condition check: k must be >= 0");
    Certificate cert;
    cert.condition = id;
    cert.k = k;
    if (k == 0) {
        cert.status = CertStatus::holds;
        return cert;
    }
    const int base = numerical_rank(H.entries).rank;
    long long evals = 0;
    const int max_card = std::min(2 * k, universe);
    try {
        auto witness =
            find_min_dropping_set(H.entries, universe, max_card, base, budget, evals, expand);
        cert.budget_used = evals;
        if (witness) {
            cert.status = CertStatus::fails;
            cert.witness = *witness;
        } else {
            cert.status = CertStatus::holds;
        }
    } catch (const BudgetExceeded& e) {
        cert.status = CertStatus::indeterminate;
        cert.budget_used = e.evaluations;
    }
    return cert;
}

}  // namespace

Certificate check_condition1(const HankelMatrix& H, int k, const SearchBudget& budget) {
    return condition_cert(ConditionId::cond1, H, k, H.rows(), budget,
                          [&](const std::vector<int>& comb) {
                              return IndexSet(comb, H.rows());
                          });
}

Certificate check_condition2(const HankelMatrix& H, int k, const SearchBudget& budget) {
    return condition_cert(ConditionId::cond2, H, k, H.q, budget,
                          [&](const std::vector<int>& comb) {
                              return periodical_set(IndexSet(comb, H.q), H.q, H.L);
                          });
}

Certificate check_condition3(const HankelMatrix& H, const IndexSet& C) {
    if (C.universe != H.rows()) throw ContractViolation("check_condition3: universe != qL");
    Certificate cert;
    cert.condition = ConditionId::cond3;
    const int base = numerical_rank(H.entries).rank;
    const IndexSet keep = C.complement();
    const int r = keep.empty() ? 0 : numerical_rank(restrict_rows(H, keep)).rank;
    cert.status = (r == base) ? CertStatus::holds : CertStatus::fails;
    if (cert.status == CertStatus::fails) cert.witness = C;
    return cert;
}

Certificate t_matrix_certificate(const HankelMatrix& H, const IndexSet& C) {
    if (!check_condition3(H, C).holds())
        throw ContractViolation("t_matrix_certificate: Condition 3 violated, no exact T exists");
    Certificate cert;
    cert.condition = ConditionId::t_norm;
    const MatrixXd HB = restrict_rows(H, C.complement());
    const MatrixXd HF = restrict_rows(H, C);
    const int f = static_cast<int>(HF.rows());
    const int R = static_cast<int>(HB.rows());

    // Particular solution row by row: HB' * t_i = HF_i'.
    MatrixXd T0(f, R);
    for (int i = 0; i < f; ++i)
        T0.row(i) = optim::least_squares_min_norm(HB.transpose(), HF.row(i).transpose()).transpose();

    // Left null space of HB parametrizes the remaining freedom: T = T0 + Y Z'.
    Eigen::JacobiSVD<MatrixXd> svd(HB, Eigen::ComputeFullU);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    const double tau = RankTolerance{}.cutoff(HB.rows(), HB.cols(), smax);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tau) ++rank;
    const int d = R - rank;
    MatrixXd Z = svd.matrixU().rightCols(d);  // R x d

    MatrixXd T = T0;
    if (d > 0 && f > 0) {
        // min t  s.t.  sum_i E_ij <= t,  |T0 + Y Z'|_ij <= E_ij.
        const int ny = f * d, ne = f * R;
        const int nv = ny + ne + 1;
        auto ycol = [&](int i, int kk) { return i * d + kk; };
        auto ecol = [&](int i, int j) { return ny + i * R + j; };
        const int tcol = nv - 1;
        const int nrows = 2 * f * R + R;
        MatrixXd A_in = MatrixXd::Zero(nrows, nv);
        VectorXd b_in = VectorXd::Zero(nrows);
        int row = 0;
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < R; ++j) {
                for (int kk = 0; kk < d; ++kk) A_in(row, ycol(i, kk)) = Z(j, kk);
                A_in(row, ecol(i, j)) = -1.0;
                b_in[row++] = -T0(i, j);
                for (int kk = 0; kk < d; ++kk) A_in(row, ycol(i, kk)) = -Z(j, kk);
                A_in(row, ecol(i, j)) = -1.0;
                b_in[row++] = T0(i, j);
            }
        for (int j = 0; j < R; ++j) {
            for (int i = 0; i < f; ++i) A_in(row, ecol(i, j)) = 1.0;
            A_in(row, tcol) = -1.0;
            ++row;
        }
        optim::LPProblem lp;
        lp.c = VectorXd::Zero(nv);
        lp.c[tcol] = 1.0;
        lp.A_in = std::move(A_in);
        lp.b_in = std::move(b_in);
        const auto sol = optim::solve_lp(lp);
        if (sol.status != optim::LPStatus::optimal)
            throw SolverFailure("t_matrix_certificate: norm-minimization LP did not solve");
        for (int i = 0; i < f; ++i)
            for (int kk = 0; kk < d; ++kk) T.row(i) += sol.x[ycol(i, kk)] * Z.col(kk).transpose();
    }
    cert.T = T;
    cert.norm = (f > 0) ? T.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
    cert.status = (cert.norm < 1.0) ? CertStatus::holds : CertStatus::fails;
    return cert;
}

Certificate epigraph_certificate(const MatrixXd& H_B, const MatrixXd& H_F,
                                 const EpigraphOptions& opt) {
    if (H_B.cols() != H_F.cols()) throw ContractViolation("epigraph_certificate: column mismatch");
    Certificate cert;
    cert.condition = ConditionId::epigraph;
    if (H_F.rows() == 0) {
        cert.optimum = 0.0;
        cert.status = CertStatus::holds;
        return cert;
    }

    // Require ker H_B subset of ker H_F (else the optimum is unbounded and the
    // certificate cannot be decided this way).
    MatrixXd stacked(H_B.rows() + H_F.rows(), H_B.cols());
    stacked << H_B, H_F;
    const int rank_b = numerical_rank(H_B).rank;
    if (numerical_rank(stacked).rank != rank_b) {
        cert.status = CertStatus::indeterminate;
        return cert;
    }

    // Reduce to row-space coordinates so the feasible polytope is bounded.
    Eigen::JacobiSVD<MatrixXd> svd(H_B, Eigen::ComputeFullV);
    const MatrixXd V = svd.matrixV().leftCols(rank_b);
    const MatrixXd B = H_B * V;
    const MatrixXd F = H_F * V;
    const int f = static_cast<int>(F.rows());
    const int nb = static_cast<int>(B.rows());
    const int nv = rank_b;

    if ((1LL << std::max(f - 1, 0)) > opt.max_sign_patterns)
        throw BudgetExceeded("epigraph_certificate: sign-pattern budget exceeded",
                             1LL << std::max(f - 1, 0));

    // max sigma' F v  s.t.  ||B v||_1 <= 1, over sign patterns sigma
    // (sigma_1 = +1 by symmetry of the feasible set).
    double best = 0.0;
    const long long patterns = 1LL << std::max(f - 1, 0);
    for (long long mask = 0; mask < patterns; ++mask) {
        VectorXd sigma(f);
        sigma[0] = 1.0;
        for (int i = 1; i < f; ++i) sigma[i] = (mask >> (i - 1)) & 1 ? 1.0 : -1.0;
        // Variables [v; r]: B v - r <= 0, -B v - r <= 0, sum r <= 1; max sigma'F v.
        optim::LPProblem lp;
        const int n = nv + nb;
        lp.c = VectorXd::Zero(n);
        lp.c.head(nv) = -(F.transpose() * sigma);
        lp.A_in = MatrixXd::Zero(2 * nb + 1, n);
        lp.b_in = VectorXd::Zero(2 * nb + 1);
        lp.A_in.block(0, 0, nb, nv) = B;
        lp.A_in.block(0, nv, nb, nb) = -MatrixXd::Identity(nb, nb);
        lp.A_in.block(nb, 0, nb, nv) = -B;
        lp.A_in.block(nb, nv, nb, nb) = -MatrixXd::Identity(nb, nb);
        lp.A_in.row(2 * nb).tail(nb).setOnes();
        lp.b_in[2 * nb] = 1.0;
        const auto sol = optim::solve_lp(lp);
        ++cert.budget_used;
        if (sol.status != optim::LPStatus::optimal)
            throw SolverFailure("epigraph_certificate: inner LP did not solve");
        best = std::max(best, -sol.objective);
    }
    cert.optimum = best;
    cert.status = (best < 1.0 - opt.delta_min) ? CertStatus::holds : CertStatus::fails;
    return cert;
}

}  // namespace bguard
