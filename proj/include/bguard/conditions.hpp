#pragma once

#include <optional>

#include "bguard/hankel.hpp"
#include "bguard/types.hpp"

namespace bguard {

enum class ConditionId { cond1, cond2, cond3, t_norm, epigraph };
enum class CertStatus { holds, fails, indeterminate };

struct Certificate {
    ConditionId condition;
    CertStatus status = CertStatus::indeterminate;
    int k = -1;                       // attack budget tested (cond1/cond2)
    std::optional<IndexSet> witness;  // violating critical set on failure
    double norm = 0.0;                // minimal ||T||_1 (t_norm)
    double optimum = 0.0;             // max ||H_F v||_1 s.t. ||H_B v||_1 = 1 (epigraph)
    MatrixXd T;                       // witness matrix for t_norm
    long long budget_used = 0;

    bool holds() const { return status == CertStatus::holds; }
};

struct SearchBudget {
    long long max_rank_evaluations = 1'000'000;
};

/// Smallest row set whose removal drops rank(M); exhaustive by increasing
/// cardinality, lexicographic tie-break.
IndexSet min_critical_row_set(const MatrixXd& M, const SearchBudget& budget = {});

/// Union of the arithmetic progressions {i, i+q, ..., i+(L-1)q} over channels i.
IndexSet periodical_set(const IndexSet& channels, int q, int L);

/// Smallest channel set whose periodical-set removal drops rank(H).
IndexSet min_channel_critical_set(const HankelMatrix& H, const SearchBudget& budget = {});

/// |S*(H)| >= 2k+1: removing any 2k rows preserves rank.
Certificate check_condition1(const HankelMatrix& H, int k, const SearchBudget& budget = {});

/// Channel analogue: |S~*(H)| >= 2k+1.
Certificate check_condition2(const HankelMatrix& H, int k, const SearchBudget& budget = {});

/// rank(H restricted to the complement of C) == rank(H).
Certificate check_condition3(const HankelMatrix& H, const IndexSet& C);

/// Minimal induced-1-norm T with H|_C = T * H|_complement(C); certifies exact
/// l1 recovery when that norm is < 1. Requires Condition 3.
Certificate t_matrix_certificate(const HankelMatrix& H, const IndexSet& C);

struct EpigraphOptions {
    double delta_min = 1e-9;        // strict-inequality margin
    long long max_sign_patterns = 4096;
};

/// max ||H_F v||_1 s.t. ||H_B v||_1 = 1, solved exactly by enumerating the
/// sign patterns of H_F v (one LP each); certifies ||H_B v||_1 > ||H_F v||_1
/// for all v != 0 when the optimum is < 1 - delta_min.
Certificate epigraph_certificate(const MatrixXd& H_B, const MatrixXd& H_F,
                                 const EpigraphOptions& opt = {});

}  // namespace bguard
