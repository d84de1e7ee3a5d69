#include <Eigen/Dense>
#include <cmath>

#include "bguard/errors.hpp"
#include "bguard/optim.hpp"
#include "bguard/rank_tolerance.hpp"

namespace bguard::optim {

VectorXd least_squares_min_norm(const MatrixXd& A, const VectorXd& b) {
    if (!A.allFinite() || !b.allFinite())
        throw ContractViolation("least_squares_min_norm: non-finite input");
    if (A.rows() != b.size())
        throw ContractViolation("least_squares_min_norm: dimension mismatch");
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("least_squares_min_norm: SVD failed");
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    const double tau = RankTolerance{}.cutoff(A.rows(), A.cols(), smax);
    VectorXd inv = svd.singularValues();
    for (int i = 0; i < inv.size(); ++i) inv[i] = (inv[i] > tau) ? 1.0 / inv[i] : 0.0;
    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * b);
}

GroupPartition::GroupPartition(int q_, int L_) : q(q_), L(L_) {
    if (q < 1 || L < 1) throw ContractViolation("GroupPartition: q, L must be >= 1");
    groups.resize(q);
    for (int i = 1; i <= q; ++i) {
        groups[i - 1].reserve(L);
        for (int l = 0; l < L; ++l) groups[i - 1].push_back(i + q * l);
    }
}

double group_objective(const VectorXd& beta, const GroupPartition& partition) {
    double obj = 0.0;
    for (const auto& grp : partition.groups) {
        double sq = 0.0;
        for (int idx : grp) sq += beta[idx - 1] * beta[idx - 1];
        obj += std::sqrt(sq);
    }
    return obj;
}

SplitResult solve_group_splitting(const MatrixXd& H, const VectorXd& w,
                                  const GroupPartition& partition, const SplitOptions& opt) {
    const int rows = static_cast<int>(H.rows());
    const int cols = static_cast<int>(H.cols());
    if (w.size() != rows) throw ContractViolation("solve_group_splitting: |w| != rows(H)");
    if (rows != partition.q * partition.L)
        throw ContractViolation("solve_group_splitting: partition does not cover rows(H)");

    // g-update is a fixed min-norm least squares; factor H once.
    Eigen::JacobiSVD<MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    const double tau = RankTolerance{}.cutoff(rows, cols, smax);
    VectorXd sinv = svd.singularValues();
    for (int i = 0; i < sinv.size(); ++i) sinv[i] = (sinv[i] > tau) ? 1.0 / sinv[i] : 0.0;
    auto solve_g = [&](const VectorXd& rhs) -> VectorXd {
        return svd.matrixV() * sinv.asDiagonal() * (svd.matrixU().transpose() * rhs);
    };

    double rho = opt.rho;
    VectorXd g = VectorXd::Zero(cols);
    VectorXd beta = VectorXd::Zero(rows);
    VectorXd u = VectorXd::Zero(rows);  // scaled dual of beta = w - Hg

    SplitResult res;
    const double scale = 1.0 + w.norm();
    for (int it = 1; it <= opt.max_iter; ++it) {
        g = solve_g(w - beta - u);
        const VectorXd Hg = H * g;
        const VectorXd beta_prev = beta;
        const VectorXd v = w - Hg - u;
        for (const auto& grp : partition.groups) {
            double nrm = 0.0;
            for (int idx : grp) nrm += v[idx - 1] * v[idx - 1];
            nrm = std::sqrt(nrm);
            const double shrink = (nrm > 1.0 / rho) ? (1.0 - 1.0 / (rho * nrm)) : 0.0;
            for (int idx : grp) beta[idx - 1] = shrink * v[idx - 1];
        }
        const VectorXd r = Hg + beta - w;  // primal residual
        u += r;
        res.primal_residual = r.norm();
        res.dual_residual = rho * (H.transpose() * (beta - beta_prev)).norm();
        res.iterations = it;
        if (res.primal_residual <= opt.tol * scale && res.dual_residual <= opt.tol * scale) {
            res.status = SplitStatus::converged;
            break;
        }
        // Residual balancing; the scaled dual must be rescaled with rho.
        if (it % 50 == 0) {
            if (res.primal_residual > 10.0 * res.dual_residual) {
                rho *= 2.0;
                u /= 2.0;
            } else if (res.dual_residual > 10.0 * res.primal_residual) {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    res.g = g;
    res.beta = beta;
    res.objective = group_objective(beta, partition);
    if (!res.g.allFinite() || !res.beta.allFinite())
        throw NumericalFailure("solve_group_splitting: non-finite iterates");
    return res;
}

}  // namespace bguard::optim
