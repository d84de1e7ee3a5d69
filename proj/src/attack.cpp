#include "bguard/attack.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "bguard/conditions.hpp"
#include "bguard/optim.hpp"

namespace bguard {
namespace {

std::vector<int> sample_without_replacement(int universe, int k, std::mt19937_64& rng) {
    std::vector<int> pool(universe);
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, universe - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

double draw_perturbation(double magnitude, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(magnitude / 2.0, magnitude);
    std::bernoulli_distribution sign(0.5);
    return (sign(rng) ? 1.0 : -1.0) * mag(rng);
}

// Shared stealth construction. `critical` is the (entry or channel) minimum
// critical set; `rows_of` expands a candidate set to matrix rows.
AttackRecord build_adversarial(const HankelMatrix& H, const Trajectory& w_bar, int k,
                               AttackKind kind, const IndexSet& critical,
                               const std::function<IndexSet(const IndexSet&)>& rows_of) {
    if (critical.size() > 2 * k)
        throw InfeasibleAttack("adversarial attack: the condition holds, no nullspace gap exists");

    // Corrupted set per the tightness construction; when a strict subset is
    // needed we take the lexicographically-last k elements so the deceptive
    // subset precedes the honest one in the recovery scan order.
    IndexSet corrupted = critical;
    if (critical.size() >= k) {
        std::vector<int> last(critical.indices.end() - k, critical.indices.end());
        corrupted = IndexSet(std::move(last), critical.universe);
    }
    const IndexSet corrupted_rows = rows_of(corrupted);
    const IndexSet benign_rows = rows_of(critical).complement();

    const VectorXd w_stacked = w_bar.stacked();
    const VectorXd g_bar = optim::least_squares_min_norm(H.entries, w_stacked);
    if ((H.entries * g_bar - w_stacked).norm() > 1e-8 * (1.0 + w_stacked.norm()))
        throw ContractViolation("adversarial attack: w_bar is not in the image of H");

    // Nullspace of the benign-row submatrix; pick the basis vector whose image
    // on the corrupted rows is largest, unit 2-norm.
    const MatrixXd HB = restrict_rows(H, benign_rows);
    Eigen::JacobiSVD<MatrixXd> svd(HB, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    const double tau = RankTolerance{}.cutoff(HB.rows(), HB.cols(), smax);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tau) ++rank;
    const MatrixXd N = svd.matrixV().rightCols(HB.cols() - rank);

    const MatrixXd HC = restrict_rows(H, corrupted_rows);
    int best = -1;
    double best_norm = 0.0;
    for (int j = 0; j < N.cols(); ++j) {
        const double nrm = (HC * N.col(j)).cwiseAbs().maxCoeff();
        if (nrm > best_norm) {
            best_norm = nrm;
            best = j;
        }
    }
    if (best < 0 || best_norm <= 1e-10)
        throw InfeasibleAttack("adversarial attack: no nullspace direction reaches the corrupted rows");
    const VectorXd g_tilde = N.col(best);

    VectorXd w_attacked = w_stacked;
    const VectorXd fake = HC * (g_bar + g_tilde);
    for (int r = 0; r < corrupted_rows.size(); ++r)
        w_attacked[to0(corrupted_rows.indices[r])] = fake[r];

    AttackRecord rec;
    rec.w = Trajectory::from_stacked(H.q, w_attacked);
    rec.support = corrupted;
    rec.kind = kind;
    rec.magnitude = best_norm;
    rec.seed = 0;
    rec.k = k;
    return rec;
}

}  // namespace

AttackRecord entry_attack_random(const Trajectory& w_bar, int k, double magnitude,
                                 std::uint64_t seed) {
    const int qL = w_bar.q * w_bar.length();
    if (k < 0 || k > qL) throw ContractViolation("entry_attack_random: k out of range");
    auto rng = std::mt19937_64(seed);
    const IndexSet support(sample_without_replacement(qL, k, rng), qL);
    VectorXd w = w_bar.stacked();
    for (int idx : support.indices) w[to0(idx)] += draw_perturbation(magnitude, rng);
    AttackRecord rec{Trajectory::from_stacked(w_bar.q, w), support, AttackKind::entry,
                     magnitude, seed, k};
    return rec;
}

AttackRecord channel_attack_random(const Trajectory& w_bar, int k, double magnitude,
                                   std::uint64_t seed) {
    const int q = w_bar.q, L = w_bar.length();
    if (k < 0 || k > q) throw ContractViolation("channel_attack_random: k out of range");
    auto rng = std::mt19937_64(seed);
    const IndexSet support(sample_without_replacement(q, k, rng), q);
    VectorXd w = w_bar.stacked();
    for (int row : periodical_set(support, q, L).indices)
        w[to0(row)] += draw_perturbation(magnitude, rng);
    AttackRecord rec{Trajectory::from_stacked(q, w), support, AttackKind::channel,
                     magnitude, seed, k};
    return rec;
}

AttackRecord adversarial_entry_attack(const HankelMatrix& H, const Trajectory& w_bar, int k) {
    if (k < 1) throw ContractViolation("adversarial_entry_attack: k must be >= 1");
    const IndexSet critical = min_critical_row_set(H.entries);
    return build_adversarial(H, w_bar, k, AttackKind::entry, critical,
                             [](const IndexSet& s) { return s; });
}

AttackRecord adversarial_channel_attack(const HankelMatrix& H, const Trajectory& w_bar, int k) {
    if (k < 1) throw ContractViolation("adversarial_channel_attack: k must be >= 1");
    const IndexSet critical = min_channel_critical_set(H);
    return build_adversarial(H, w_bar, k, AttackKind::channel, critical,
                             [&](const IndexSet& s) { return periodical_set(s, H.q, H.L); });
}

}  // namespace bguard
