#pragma once

#include <Eigen/Dense>

#include "bguard/types.hpp"

namespace bguard {

enum class TimeKind { continuous, discrete };

/// State-space model used only for data generation and ground truth;
/// the recovery side of the toolkit never sees one.
struct SystemSpec {
    MatrixXd A;  // n x n
    MatrixXd B;  // n x m
    MatrixXd C;  // p x n  (no direct feedthrough)
    TimeKind time_kind = TimeKind::continuous;
    double ts = 0.0;  // sampling time, discrete systems only

    SystemSpec() = default;
    SystemSpec(MatrixXd A, MatrixXd B, MatrixXd C, TimeKind kind, double ts = 0.0);

    int n() const { return static_cast<int>(A.rows()); }
    int m() const { return static_cast<int>(B.cols()); }
    int p() const { return static_cast<int>(C.rows()); }
    int q() const { return m() + p(); }
};

/// Scaling-and-squaring matrix exponential (truncated Taylor core).
MatrixXd matrix_exponential(const MatrixXd& M);

/// Zero-order-hold discretization via the exponential of the augmented
/// [[A, B], [0, 0]] * Ts block; C carries over unchanged.
SystemSpec discretize_zoh(const SystemSpec& sys, double Ts);

/// x(t+1) = A x(t) + B u(t), y(t) = C x(t), x(1) = x0; w(t) = [u(t); y(t)].
Trajectory simulate(const SystemSpec& sys, const MatrixXd& u, const VectorXd& x0);

/// Per-mass physical parameters of the interconnected chain.
struct ChainParams {
    VectorXd stiffness;  // k_i, spring tying mass i to mass i-1 (mass 1 to the wall)
    VectorXd mass;       // m_i
    VectorXd damping;    // b_i

    /// The reference 3-mass parameter list for n <= 3; a heterogeneous,
    /// lightly damped set for longer chains (spread mode frequencies keep
    /// the window rank numerically visible at larger n).
    static ChainParams defaults(int n_masses);
};

/// n-mass chain, force input on mass 1, outputs = displacements of masses
/// 2..n plus the velocity of mass n (p = n_masses, m = 1, order 2*n_masses).
SystemSpec mass_spring_chain(int n_masses, const ChainParams& params);
SystemSpec mass_spring_chain(int n_masses);

struct SystemInvariants {
    int m = 0;
    int p = 0;
    int n = 0;
    int lag = 0;        // observability index of (A, C)
    bool minimal = true;  // false when rank of the observability matrix < n
};

SystemInvariants system_invariants(const SystemSpec& sys);

}  // namespace bguard
