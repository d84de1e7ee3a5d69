#include "bguard/types.hpp"

#include <algorithm>

namespace bguard {

Trajectory::Trajectory(int q_, MatrixXd samples_) : q(q_), samples(std::move(samples_)) {
    if (q < 1) throw ContractViolation("Trajectory: q must be >= 1");
    if (samples.rows() != q) throw ContractViolation("Trajectory: sample dimension != q");
    if (!samples.allFinite()) throw ContractViolation("Trajectory: non-finite values");
}

VectorXd Trajectory::stacked() const {
    VectorXd v(q * length());
    for (int t = 0; t < length(); ++t) v.segment(t * q, q) = samples.col(t);
    return v;
}

Trajectory Trajectory::from_stacked(int q, const VectorXd& v) {
    if (q < 1 || v.size() % q != 0) throw ContractViolation("from_stacked: size not a multiple of q");
    const int L = static_cast<int>(v.size()) / q;
    MatrixXd s(q, L);
    for (int t = 0; t < L; ++t) s.col(t) = v.segment(t * q, q);
    return Trajectory(q, std::move(s));
}

IndexSet::IndexSet(std::vector<int> indices_, int universe_)
    : indices(std::move(indices_)), universe(universe_) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int i : indices)
        if (i < 1 || i > universe) throw ContractViolation("IndexSet: index out of universe");
}

bool IndexSet::contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

IndexSet IndexSet::complement() const {
    std::vector<int> out;
    out.reserve(universe - size());
    auto it = indices.begin();
    for (int i = 1; i <= universe; ++i) {
        if (it != indices.end() && *it == i) {
            ++it;
        } else {
            out.push_back(i);
        }
    }
    return IndexSet(std::move(out), universe);
}

IndexSet IndexSet::full(int universe) {
    std::vector<int> all(universe);
    for (int i = 0; i < universe; ++i) all[i] = i + 1;
    return IndexSet(std::move(all), universe);
}

}  // namespace bguard
