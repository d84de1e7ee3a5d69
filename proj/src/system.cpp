#include "bguard/system.hpp"

#include <cmath>

#include "bguard/hankel.hpp"

namespace bguard {

SystemSpec::SystemSpec(MatrixXd A_, MatrixXd B_, MatrixXd C_, TimeKind kind, double ts_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), time_kind(kind), ts(ts_) {
    if (A.rows() != A.cols()) throw ContractViolation("SystemSpec: A not square");
    if (B.rows() != A.rows()) throw ContractViolation("SystemSpec: B row count != n");
    if (C.cols() != A.rows()) throw ContractViolation("SystemSpec: C column count != n");
    if (m() + p() < 1) throw ContractViolation("SystemSpec: q = m + p must be >= 1");
    if (!A.allFinite() || !B.allFinite() || !C.allFinite())
        throw ContractViolation("SystemSpec: non-finite matrix entries");
}

MatrixXd matrix_exponential(const MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (n == 0) return MatrixXd(0, 0);
    const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();  // induced inf-norm
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const double scale = std::ldexp(1.0, -squarings);

    MatrixXd As = M * scale;
    MatrixXd term = MatrixXd::Identity(n, n);
    MatrixXd sum = term;
    for (int k = 1; k <= 18; ++k) {
        term = (term * As) / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    if (!sum.allFinite()) throw NumericalFailure("matrix_exponential: non-finite result");
    return sum;
}

SystemSpec discretize_zoh(const SystemSpec& sys, double Ts) {
    if (sys.time_kind != TimeKind::continuous)
        throw ContractViolation("discretize_zoh: system already discrete");
    if (!(Ts > 0)) throw ContractViolation("discretize_zoh: Ts must be positive");
    const int n = sys.n(), m = sys.m();
    MatrixXd aug = MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = sys.A;
    aug.topRightCorner(n, m) = sys.B;
    const MatrixXd phi = matrix_exponential(aug * Ts);
    return SystemSpec(phi.topLeftCorner(n, n), phi.topRightCorner(n, m), sys.C,
                      TimeKind::discrete, Ts);
}

Trajectory simulate(const SystemSpec& sys, const MatrixXd& u, const VectorXd& x0) {
    if (sys.time_kind != TimeKind::discrete)
        throw ContractViolation("simulate: discrete system required");
    if (u.rows() != sys.m()) throw ContractViolation("simulate: u row count != m");
    if (x0.size() != sys.n()) throw ContractViolation("simulate: x0 size != n");
    const int L = static_cast<int>(u.cols());
    MatrixXd w(sys.q(), L);
    VectorXd x = x0;
    for (int t = 0; t < L; ++t) {
        w.col(t).head(sys.m()) = u.col(t);
        w.col(t).tail(sys.p()) = sys.C * x;
        x = sys.A * x + sys.B * u.col(t);
    }
    return Trajectory(sys.q(), std::move(w));
}

ChainParams ChainParams::defaults(int n_masses) {
    ChainParams p;
    p.stiffness.resize(n_masses);
    p.mass.resize(n_masses);
    p.damping.resize(n_masses);
    if (n_masses <= 3) {
        const double k3[] = {2.0, 3.0, 1.0};
        const double m3[] = {1.0, 2.0, 10.0};
        const double b3[] = {3.0, 4.0, 2.0};
        for (int i = 0; i < n_masses; ++i) {
            p.stiffness[i] = k3[i];
            p.mass[i] = m3[i];
            p.damping[i] = b3[i];
        }
        return p;
    }
    // Longer chains need well-separated mode frequencies and light damping:
    // repeating the 3-mass triple makes the eigenvalues coincide and heavy
    // damping drains the far masses, collapsing the numerical window rank.
    for (int i = 0; i < n_masses; ++i) {
        p.stiffness[i] = 2.0 + std::cos(3.7 * i);
        p.mass[i] = 1.0 + 0.4 * std::sin(2.3 * i);
        p.damping[i] = 0.05;
    }
    return p;
}

SystemSpec mass_spring_chain(int n_masses, const ChainParams& params) {
    if (n_masses < 2) throw ContractViolation("mass_spring_chain: need at least 2 masses");
    if (params.stiffness.size() != n_masses || params.mass.size() != n_masses ||
        params.damping.size() != n_masses)
        throw ContractViolation("mass_spring_chain: parameter length != n_masses");
    if (params.stiffness.minCoeff() <= 0 || params.mass.minCoeff() <= 0 ||
        params.damping.minCoeff() <= 0)
        throw ContractViolation("mass_spring_chain: physical parameters must be positive");

    // State x = [d_1, v_1, d_2, v_2, ..., d_n, v_n].
    const int n = 2 * n_masses;
    MatrixXd A = MatrixXd::Zero(n, n);
    MatrixXd B = MatrixXd::Zero(n, 1);
    for (int i = 0; i < n_masses; ++i) {
        const int d = 2 * i, v = 2 * i + 1;
        const double ki = params.stiffness[i], mi = params.mass[i], bi = params.damping[i];
        A(d, v) = 1.0;
        A(v, d) = -ki / mi;
        A(v, v) = -bi / mi;
        if (i > 0) A(v, 2 * (i - 1)) = ki / mi;  // spring to the previous mass
    }
    B(1, 0) = 1.0 / params.mass[0];

    MatrixXd C = MatrixXd::Zero(n_masses, n);
    for (int i = 1; i < n_masses; ++i) C(i - 1, 2 * i) = 1.0;  // displacements of masses 2..n
    C(n_masses - 1, n - 1) = 1.0;                              // velocity of the last mass
    return SystemSpec(std::move(A), std::move(B), std::move(C), TimeKind::continuous);
}

SystemSpec mass_spring_chain(int n_masses) {
    return mass_spring_chain(n_masses, ChainParams::defaults(n_masses));
}

SystemInvariants system_invariants(const SystemSpec& sys) {
    SystemInvariants inv;
    inv.m = sys.m();
    inv.p = sys.p();
    inv.n = sys.n();
    const int n = sys.n(), p = sys.p();
    if (n == 0) {
        inv.lag = 0;
        return inv;
    }
    MatrixXd obs(p * n, n);
    MatrixXd block = sys.C;
    for (int l = 0; l < n; ++l) {
        obs.block(p * l, 0, p, n) = block;
        block = block * sys.A;
    }
    const int full_rank = numerical_rank(obs).rank;
    inv.minimal = (full_rank == n);
    for (int l = 1; l <= n; ++l) {
        if (numerical_rank(obs.topRows(p * l)).rank == full_rank) {
            inv.lag = l;
            break;
        }
    }
    return inv;
}

}  // namespace bguard
