#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bguard/optim.hpp"
#include "test_util.hpp"

using namespace bguard;
using namespace bguard::optim;

namespace {

MatrixXd rows_from(std::initializer_list<std::initializer_list<double>> vals) {
    MatrixXd M(static_cast<int>(vals.size()), static_cast<int>(vals.begin()->size()));
    int r = 0;
    for (const auto& row : vals) {
        int c = 0;
        for (double v : row) M(r, c++) = v;
        ++r;
    }
    return M;
}

VectorXd vec(std::initializer_list<double> vals) {
    VectorXd v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

// Reference for min ||r||_1 s.t. V'r = c via the general solver:
// variables [r+; r-] >= 0, minimize the total sum.
double l1_equality_reference(const MatrixXd& V, const VectorXd& w) {
    const int n = static_cast<int>(V.rows());
    LPProblem p;
    p.c = VectorXd::Ones(2 * n);
    p.A_eq = MatrixXd(V.cols(), 2 * n);
    p.A_eq << V.transpose(), -V.transpose();
    p.b_eq = V.transpose() * w;
    p.lb = VectorXd::Zero(2 * n);
    const LPSolution sol = solve_lp(p);
    REQUIRE(sol.status == LPStatus::optimal);
    return sol.objective;
}

}  // namespace

TEST_CASE("interior-point solver matches independently solved fixtures") {
    struct Fixture {
        MatrixXd Ae, Ai;
        VectorXd c, be, bi;
        double objective;
    };
    // Optimal objectives cross-checked with an external simplex/IPM solver
    // before being frozen here. All variables live in [-5, 5].
    const Fixture fixtures[] = {
        {rows_from({{-1.302, 0.128, -0.316, -0.017, -0.853},
                    {0.879, 0.778, 0.066, 1.127, 0.468}}),
         rows_from({{-0.859, 0.369, -0.959, 0.878, -0.05},
                    {-0.185, -0.681, 1.223, -0.155, -0.428},
                    {-0.352, 0.532, 0.365, 0.413, 0.431}}),
         vec({0.305, -1.04, 0.75, 0.941, -1.951}), vec({-3.19067, 0.904068}),
         vec({-1.115304, -0.769491, -0.387386}), -17.038319911117114},
        {rows_from({{0.232, 0.117, 0.219, 0.871, 0.224},
                    {0.679, 0.068, 0.289, 0.631, -1.457}}),
         rows_from({{-0.32, -0.47, -0.639, -0.275, 1.495},
                    {-0.866, 0.968, -1.683, -0.335, 0.163},
                    {0.586, 0.711, 0.793, -0.349, -0.462}}),
         vec({-0.824, 0.651, 0.743, 0.543, -0.666}), vec({-1.295434, 0.82489}),
         vec({0.065405, 1.591776, 0.865599}), -3.869140226797093},
        {rows_from({{-0.662, -0.363, -0.382, -1.196, 0.487},
                    {-0.469, 0.012, 0.481, 0.447, 0.665}}),
         rows_from({{-0.098, -0.423, -0.08, -1.687, -1.447},
                    {-1.323, -0.997, 0.4, -0.905, -0.378},
                    {1.299, -0.356, 0.738, -0.934, -0.205}}),
         vec({-0.427, 0.159, 0.626, -0.309, 0.457}), vec({2.707927, 0.362163}),
         vec({2.692484, 3.923866, 2.47666}), -3.295218281802869},
        {rows_from({{-0.239, -1.023, 0.179, 0.22, 1.359},
                    {0.835, 0.357, 1.463, -1.189, -0.64}}),
         rows_from({{-0.927, -0.39, -1.377, 0.635, -0.222},
                    {-1.471, -1.016, 0.314, 0.838, 1.997},
                    {2.914, 0.414, -0.99, -2.132, 0.268}}),
         vec({0.072, -0.529, 0.233, 0.022, 1.602}), vec({1.926978, -2.236957}),
         vec({1.589087, 3.594674, -0.313058}), -1.0161845335230235},
    };
    for (const auto& f : fixtures) {
        LPProblem p;
        p.c = f.c;
        p.A_eq = f.Ae;
        p.b_eq = f.be;
        p.A_in = f.Ai;
        p.b_in = f.bi;
        p.lb = VectorXd::Constant(5, -5.0);
        p.ub = VectorXd::Constant(5, 5.0);
        const LPSolution sol = solve_lp(p);
        REQUIRE(sol.status == LPStatus::optimal);
        CHECK(sol.objective ==
              doctest::Approx(f.objective).epsilon(1e-7));
        CHECK((f.Ae * sol.x - f.be).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK((f.Ai * sol.x - f.bi).maxCoeff() <= 1e-6);
        CHECK(sol.x.cwiseAbs().maxCoeff() <= 5.0 + 1e-6);
    }
}

TEST_CASE("solver classifies infeasible and unbounded problems") {
    LPProblem infeas;
    infeas.c = vec({1.0});
    infeas.A_in = rows_from({{1.0}, {-1.0}});
    infeas.b_in = vec({-1.0, -1.0});  // x <= -1 and x >= 1
    CHECK(solve_lp(infeas).status == LPStatus::infeasible);

    LPProblem unb;
    unb.c = vec({-1.0, 0.0});
    unb.A_in = rows_from({{0.0, 1.0}});
    unb.b_in = vec({1.0});
    CHECK(solve_lp(unb).status == LPStatus::unbounded);
}

TEST_CASE("least-squares solution is the minimum-norm one") {
    std::mt19937_64 gen(19);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        // Wide rank-deficient A: solution must satisfy the normal equations
        // and lie in the row space of A.
        MatrixXd Lm(4, 3), Rm(3, 6);
        for (int i = 0; i < Lm.size(); ++i) Lm(i % 4, i / 4) = dist(gen);
        for (int i = 0; i < Rm.size(); ++i) Rm(i % 3, i / 3) = dist(gen);
        const MatrixXd A = Lm * Rm;
        VectorXd b(4);
        for (int i = 0; i < 4; ++i) b[i] = dist(gen);
        const VectorXd x = least_squares_min_norm(A, b);
        CHECK((A.transpose() * (A * x - b)).cwiseAbs().maxCoeff() <= 1e-9);
        // Row-space membership: projecting onto the row space is a no-op.
        Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
        const MatrixXd Vr = svd.matrixV().leftCols(3);
        CHECK((Vr * (Vr.transpose() * x) - x).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("dual vertex walk solves the l1 equality problem exactly") {
    std::mt19937_64 gen(23);
    std::normal_distribution<double> dist(0.0, 1.0);
    int solved = 0;
    for (int t = 0; t < 40; ++t) {
        const int rows = 8 + static_cast<int>(gen() % 8);
        const int f = 1 + static_cast<int>(gen() % 4);
        MatrixXd M(rows, f);
        for (int i = 0; i < M.size(); ++i) M(i % rows, i / rows) = dist(gen);
        const MatrixXd V = Eigen::HouseholderQR<MatrixXd>(M).householderQ() *
                           MatrixXd::Identity(rows, f);
        VectorXd w(rows);
        for (int i = 0; i < rows; ++i) w[i] = dist(gen);
        const L1EqualityResult res = min_l1_equality(V, w);
        if (!res.ok) continue;  // caller falls back to the general solver
        ++solved;
        CHECK((V.transpose() * res.r - V.transpose() * w).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(res.objective == doctest::Approx(res.r.cwiseAbs().sum()).epsilon(1e-10));
        CHECK(res.objective ==
              doctest::Approx(l1_equality_reference(V, w)).epsilon(1e-7));
    }
    // The fast path is the common case, not a lucky one.
    CHECK(solved >= 35);
}

TEST_CASE("group partition tiles the stacked indices by channel") {
    const GroupPartition part(3, 4);
    REQUIRE(part.groups.size() == 3);
    CHECK(part.groups[0] == std::vector<int>{1, 4, 7, 10});
    CHECK(part.groups[2] == std::vector<int>{3, 6, 9, 12});
    VectorXd beta = VectorXd::Zero(12);
    beta[0] = 3.0;
    beta[3] = 4.0;  // both in group 1 -> norm 5
    beta[2] = 2.0;  // group 3 -> norm 2
    CHECK(group_objective(beta, part) == doctest::Approx(7.0));
}

TEST_CASE("group splitting reaches a point with no descent direction") {
    const SystemSpec sys = testutil::chain3_discrete();
    const HankelMatrix H = build_hankel(testutil::gpe_data(sys, 11, 3, 41), 3);
    Trajectory w_bar = testutil::true_window(sys, 3, 41);
    // Corrupt one output channel so the optimum is nonzero.
    w_bar.samples.row(2).array() += 4.0;
    const VectorXd w = w_bar.stacked();
    const GroupPartition part(H.q, H.L);
    const SplitResult res = solve_group_splitting(H.entries, w, part);
    REQUIRE(res.status == SplitStatus::converged);
    const auto objective = [&](const VectorXd& g) {
        return group_objective(w - H.entries * g, part);
    };
    const VectorXd g0 = res.g;
    const double f0 = objective(g0);
    CHECK(res.objective == doctest::Approx(f0).epsilon(1e-6));
    // Convexity: if no sampled direction descends, the point is optimal.
    std::mt19937_64 gen(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 60; ++t) {
        VectorXd d(g0.size());
        for (int i = 0; i < d.size(); ++i) d[i] = dist(gen);
        d.normalize();
        CHECK(objective(g0 + 1e-3 * d) >= f0 - 1e-6 * (1 + f0));
    }
}

TEST_CASE("group splitting recovers a clean trajectory with zero objective") {
    const SystemSpec sys = testutil::chain3_discrete();
    const HankelMatrix H = build_hankel(testutil::gpe_data(sys, 11, 3, 43), 3);
    const VectorXd w = testutil::true_window(sys, 3, 43).stacked();
    const SplitResult res = solve_group_splitting(H.entries, w, GroupPartition(H.q, H.L));
    REQUIRE(res.status == SplitStatus::converged);
    CHECK(res.objective <= 1e-6);
    CHECK((w - H.entries * res.g).cwiseAbs().maxCoeff() <= 1e-5);
}
