#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bguard/errors.hpp"

namespace bguard {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A length-`length` sequence of q-dimensional samples w(1),...,w(length),
/// stored one column per sample with the stacking w = [u; y].
struct Trajectory {
    int q = 0;
    MatrixXd samples;  // q x length, column t-1 holds w(t)

    Trajectory() = default;
    Trajectory(int q, MatrixXd samples);

    int length() const { return static_cast<int>(samples.cols()); }

    /// Stacked window vector (w(1); w(2); ...; w(length)) in R^{q*length}.
    VectorXd stacked() const;

    static Trajectory from_stacked(int q, const VectorXd& v);
};

/// Sorted, duplicate-free 1-based indices bounded by `universe`
/// (qL for entry sets, q for channel sets).
struct IndexSet {
    std::vector<int> indices;
    int universe = 0;

    IndexSet() = default;
    IndexSet(std::vector<int> indices, int universe);

    int size() const { return static_cast<int>(indices.size()); }
    bool empty() const { return indices.empty(); }
    bool contains(int i) const;
    IndexSet complement() const;

    static IndexSet full(int universe);

    bool operator==(const IndexSet& other) const = default;
};

/// All indices crossing this boundary are 1-based; converts on use.
inline int to0(int i) { return i - 1; }

}  // namespace bguard
