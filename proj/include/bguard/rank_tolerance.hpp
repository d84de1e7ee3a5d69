#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

namespace bguard {

/// Shared singular-value cutoff policy: tau = max(rows, cols) * sigma_max * eps,
/// never below an absolute floor. All rank decisions in the toolkit use this.
struct RankTolerance {
    double eps = std::numeric_limits<double>::epsilon();
    double absolute_floor = 1e-10;

    double cutoff(Eigen::Index rows, Eigen::Index cols, double sigma_max) const {
        const double rel = static_cast<double>(std::max(rows, cols)) * sigma_max * eps;
        return std::max(rel, absolute_floor);
    }
};

}  // namespace bguard
