#include "bguard/hankel.hpp"

#include <cmath>
#include <limits>

namespace bguard {

HankelMatrix build_hankel(const Trajectory& w_d, int L) {
    const int T = w_d.length();
    if (L < 1 || L > T) throw ContractViolation("build_hankel: require 1 <= L <= T");
    HankelMatrix H;
    H.q = w_d.q;
    H.L = L;
    H.T = T;
    H.entries.resize(w_d.q * L, T - L + 1);
    for (int c = 0; c < T - L + 1; ++c)
        for (int r = 0; r < L; ++r) H.entries.block(r * w_d.q, c, w_d.q, 1) = w_d.samples.col(r + c);
    return H;
}

RankReport numerical_rank(const MatrixXd& M, const RankTolerance& tol) {
    if (!M.allFinite()) throw ContractViolation("numerical_rank: non-finite entries");
    RankReport rep;
    if (M.rows() == 0 || M.cols() == 0) return rep;
    Eigen::JacobiSVD<MatrixXd> svd(M);
    if (svd.info() != Eigen::Success) throw NumericalFailure("numerical_rank: SVD failed");
    rep.singular_values = svd.singularValues();
    const double tau = tol.cutoff(M.rows(), M.cols(), rep.singular_values[0]);
    for (int i = 0; i < rep.singular_values.size(); ++i)
        if (rep.singular_values[i] > tau) ++rep.rank;
    return rep;
}

namespace {

// Geometric-mean row/column equilibration. Diagonal scaling preserves rank
// exactly, and flattening the dynamic range of the data keeps genuinely
// independent but weakly excited directions above the SVD noise floor.
MatrixXd equilibrated(MatrixXd M) {
    for (int pass = 0; pass < 4; ++pass) {
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            const double s = M.row(r).cwiseAbs().maxCoeff();
            if (s > 0) M.row(r) /= std::sqrt(s);
        }
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            const double s = M.col(c).cwiseAbs().maxCoeff();
            if (s > 0) M.col(c) /= std::sqrt(s);
        }
    }
    return M;
}

}  // namespace

GpeReport check_gpe(const HankelMatrix& H, int m, int n, const RankTolerance& tol) {
    GpeReport rep;
    rep.target = m * H.L + n;
    if (rep.target > std::min(H.rows(), H.cols()))
        throw ContractViolation("check_gpe: target rank m*L+n exceeds matrix dimensions");
    // Rank is decided on the equilibrated matrix, whose entries are O(1); the
    // relative term of the cutoff dominates there, so the absolute floor
    // (sized for raw data scales) is dropped.
    RankTolerance gpe_tol = tol;
    gpe_tol.absolute_floor = 0.0;
    const RankReport rank = numerical_rank(equilibrated(H.entries), gpe_tol);
    rep.rank = rank.rank;
    rep.holds = (rep.rank == rep.target);
    const auto& sv = rank.singular_values;
    if (rep.target >= 1 && rep.target <= sv.size()) {
        const double num = sv[rep.target - 1];
        const double den = (rep.target < sv.size()) ? sv[rep.target] : 0.0;
        rep.gap_ratio = (den > 0.0) ? num / den : std::numeric_limits<double>::infinity();
    }
    return rep;
}

MatrixXd restrict_rows(const MatrixXd& M, const IndexSet& I) {
    if (I.universe != M.rows()) throw ContractViolation("restrict_rows: universe != row count");
    MatrixXd out(I.size(), M.cols());
    for (int r = 0; r < I.size(); ++r) out.row(r) = M.row(to0(I.indices[r]));
    return out;
}

MatrixXd restrict_rows(const HankelMatrix& H, const IndexSet& I) {
    return restrict_rows(H.entries, I);
}

VectorXd restrict_entries(const VectorXd& v, const IndexSet& I) {
    if (I.universe != v.size()) throw ContractViolation("restrict_entries: universe != size");
    VectorXd out(I.size());
    for (int r = 0; r < I.size(); ++r) out[r] = v[to0(I.indices[r])];
    return out;
}

}  // namespace bguard
