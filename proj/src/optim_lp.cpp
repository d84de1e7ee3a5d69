#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "bguard/errors.hpp"
#include "bguard/optim.hpp"

namespace bguard::optim {
namespace {

// Internal standard form: min cs'x  s.t.  As x = bs, x >= 0.
struct StandardForm {
    MatrixXd A;
    VectorXd b;
    VectorXd c;
    double obj_const = 0.0;
    // Original-variable reconstruction: x_orig = S * x_std(0:N) + shift.
    MatrixXd S;
    VectorXd shift;
    int n_eq = 0;  // leading equality rows (duals map to dual_eq)
    int n_in = 0;  // trailing inequality rows (duals map to dual_in)
};

StandardForm to_standard(const LPProblem& p) {
    const int n = static_cast<int>(p.c.size());
    const int m_eq = static_cast<int>(p.b_eq.size());
    const int m_in0 = static_cast<int>(p.b_in.size());
    if ((m_eq && p.A_eq.cols() != n) || (m_in0 && p.A_in.cols() != n))
        throw ContractViolation("solve_lp: constraint column count != |c|");
    if (!p.c.allFinite()) throw ContractViolation("solve_lp: non-finite cost");

    auto lo = [&](int j) { return p.lb.size() ? p.lb[j] : -kInf; };
    auto up = [&](int j) { return p.ub.size() ? p.ub[j] : kInf; };

    // Column layout: shifted/flipped/split variables first, then slacks.
    struct VarMap {
        int col1 = -1, col2 = -1;  // col2 used by split (negative part)
        double shift = 0.0;
        double sign = 1.0;
    };
    std::vector<VarMap> vmap(n);
    std::vector<std::pair<int, double>> ub_rows;  // (column, bound) y_col <= bound
    int N = 0;
    for (int j = 0; j < n; ++j) {
        const double l = lo(j), u = up(j);
        if (l > u) throw ContractViolation("solve_lp: lb > ub");
        if (std::isfinite(l)) {
            vmap[j] = {N, -1, l, 1.0};
            if (std::isfinite(u)) ub_rows.emplace_back(N, u - l);
            ++N;
        } else if (std::isfinite(u)) {
            vmap[j] = {N, -1, u, -1.0};  // x = u - y
            ++N;
        } else {
            vmap[j] = {N, N + 1, 0.0, 1.0};  // x = y+ - y-
            N += 2;
        }
    }

    const int m_in = m_in0 + static_cast<int>(ub_rows.size());
    StandardForm sf;
    sf.n_eq = m_eq;
    sf.n_in = m_in;
    sf.S = MatrixXd::Zero(n, N);
    sf.shift = VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        sf.S(j, vmap[j].col1) = vmap[j].sign;
        if (vmap[j].col2 >= 0) sf.S(j, vmap[j].col2) = -1.0;
        sf.shift[j] = vmap[j].shift;
    }

    const int rows = m_eq + m_in;
    const int cols = N + m_in;  // one slack per inequality row
    sf.A = MatrixXd::Zero(rows, cols);
    sf.b = VectorXd::Zero(rows);
    if (m_eq) {
        sf.A.block(0, 0, m_eq, N) = p.A_eq * sf.S;
        sf.b.head(m_eq) = p.b_eq - p.A_eq * sf.shift;
    }
    if (m_in0) {
        sf.A.block(m_eq, 0, m_in0, N) = p.A_in * sf.S;
        sf.b.segment(m_eq, m_in0) = p.b_in - p.A_in * sf.shift;
    }
    for (std::size_t r = 0; r < ub_rows.size(); ++r) {
        sf.A(m_eq + m_in0 + static_cast<int>(r), ub_rows[r].first) = 1.0;
        sf.b[m_eq + m_in0 + static_cast<int>(r)] = ub_rows[r].second;
    }
    for (int r = 0; r < m_in; ++r) sf.A(m_eq + r, N + r) = 1.0;

    sf.c = VectorXd::Zero(cols);
    sf.c.head(N) = sf.S.transpose() * p.c;
    sf.obj_const = p.c.dot(sf.shift);
    return sf;
}

struct CoreResult {
    VectorXd x;
    VectorXd lambda;
    VectorXd s;
    LPStatus status = LPStatus::iteration_cap;
    int iterations = 0;
    double gap = kInf;
};

double max_step(const VectorXd& v, const VectorXd& dv) {
    double a = 1.0;
    for (int i = 0; i < v.size(); ++i)
        if (dv[i] < 0) a = std::min(a, -v[i] / dv[i]);
    return a;
}

// Mehrotra predictor-corrector on the standard form. Returns iteration_cap
// (caller falls back to simplex) when it cannot certify optimality.
CoreResult ipm(const StandardForm& sf, const LPOptions& opt) {
    const int m = static_cast<int>(sf.b.size());
    const int n = static_cast<int>(sf.c.size());
    CoreResult res;
    if (m == 0) {
        res.x = VectorXd::Zero(n);
        res.lambda = VectorXd();
        res.status = (sf.c.minCoeff() < 0) ? LPStatus::unbounded : LPStatus::optimal;
        res.gap = 0.0;
        return res;
    }
    const MatrixXd& A = sf.A;
    const double reg = 1e-12;

    // Mehrotra starting point.
    MatrixXd AAt = A * A.transpose();
    AAt.diagonal().array() += reg;
    Eigen::LDLT<MatrixXd> lltAAt(AAt);
    VectorXd x = A.transpose() * lltAAt.solve(sf.b);
    VectorXd lambda = lltAAt.solve(A * sf.c);
    VectorXd s = sf.c - A.transpose() * lambda;
    const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
    const double ds = std::max(-1.5 * s.minCoeff(), 0.0);
    x.array() += dx;
    s.array() += ds;
    const double xs = x.dot(s);
    if (xs > 0) {
        x.array() += 0.5 * xs / s.sum();
        s.array() += 0.5 * xs / x.sum();
    } else {
        x.array() += 1.0;
        s.array() += 1.0;
    }

    const double bnorm = 1.0 + sf.b.norm();
    const double cnorm = 1.0 + sf.c.norm();
    double prev_mu = kInf;
    double best_err = kInf;
    int stall = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        res.iterations = it;
        if (!x.allFinite() || !s.allFinite() || !lambda.allFinite()) break;
        const VectorXd rb = A * x - sf.b;
        const VectorXd rc = A.transpose() * lambda + s - sf.c;
        const double mu = x.dot(s) / n;
        const double pobj = sf.c.dot(x);
        const double dobj = sf.b.dot(lambda);
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
        const double err = std::max({rb.norm() / bnorm, rc.norm() / cnorm, gap});
        if (err < best_err) {
            best_err = err;
            res.x = x;
            res.lambda = lambda;
            res.s = s;
            res.gap = gap;
        }
        if (err <= opt.tol) {
            res.status = LPStatus::optimal;
            return res;
        }
        // No more progress is possible in double precision once mu underflows,
        // and a blow-up past the best iterate means the factorization has tipped.
        if (mu < 1e-16 || err > 1e4 * best_err || x.norm() > 1e14) break;
        if (mu > 0.999 * prev_mu) {
            if (++stall > 8) break;
        } else {
            stall = 0;
        }
        prev_mu = mu;

        const VectorXd d = x.array() / s.array();
        MatrixXd M = A * d.asDiagonal() * A.transpose();
        M.diagonal().array() += reg * (1.0 + M.diagonal().maxCoeff());
        Eigen::LDLT<MatrixXd> fac(M);
        if (fac.info() != Eigen::Success) break;

        // Affine scaling direction.
        VectorXd rxs = -(x.array() * s.array()).matrix();
        VectorXd rhs = -rb - A * ((rxs.array() / s.array()).matrix()) - A * (d.asDiagonal() * rc);
        VectorXd dl = fac.solve(rhs);
        VectorXd dsv = -rc - A.transpose() * dl;
        VectorXd dxv = (rxs.array() / s.array()).matrix() - (d.array() * dsv.array()).matrix();
        const double ap = max_step(x, dxv);
        const double ad = max_step(s, dsv);
        const double mu_aff = (x + ap * dxv).dot(s + ad * dsv) / n;
        const double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);

        // Corrector.
        rxs = (-(x.array() * s.array()) + sigma * mu - dxv.array() * dsv.array()).matrix();
        rhs = -rb - A * ((rxs.array() / s.array()).matrix()) - A * (d.asDiagonal() * rc);
        dl = fac.solve(rhs);
        dsv = -rc - A.transpose() * dl;
        dxv = (rxs.array() / s.array()).matrix() - (d.array() * dsv.array()).matrix();
        const double tau = 0.99995;
        const double app = std::min(1.0, tau * max_step(x, dxv));
        const double add = std::min(1.0, tau * max_step(s, dsv));
        if (app < 1e-12 && add < 1e-12) break;
        x += app * dxv;
        lambda += add * dl;
        s += add * dsv;
    }
    res.status = LPStatus::iteration_cap;  // best iterate already stored
    return res;
}

// Extract a basic solution from an interior-point iterate: pick m independent
// columns in decreasing x/(x+s) order, solve the basis exactly, and accept
// when primal values and reduced costs check out. Gives a vertex-exact answer
// when the interior point got close but could not certify.
CoreResult crossover(const StandardForm& sf, const CoreResult& ip) {
    const int m = static_cast<int>(sf.b.size());
    const int n = static_cast<int>(sf.c.size());
    CoreResult res;
    if (ip.x.size() != n || ip.s.size() != n || !ip.x.allFinite() || !ip.s.allFinite())
        return res;

    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = j;
    VectorXd score(n);
    for (int j = 0; j < n; ++j)
        score[j] = ip.x[j] / (ip.x[j] + std::max(ip.s[j], 0.0) + 1e-300);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });

    // Greedy independent-column selection by elimination.
    MatrixXd work = MatrixXd::Zero(m, m);
    std::vector<int> basis;
    basis.reserve(m);
    for (int j : order) {
        if (static_cast<int>(basis.size()) == m) break;
        VectorXd col = sf.A.col(j);
        for (std::size_t i = 0; i < basis.size(); ++i) col -= work.col(i).dot(col) * work.col(i);
        const double nrm = col.norm();
        if (nrm > 1e-8 * (1.0 + sf.A.col(j).norm())) {
            work.col(basis.size()) = col / nrm;
            basis.push_back(j);
        }
    }
    if (static_cast<int>(basis.size()) != m) return res;

    MatrixXd B(m, m);
    VectorXd cB(m);
    for (int i = 0; i < m; ++i) {
        B.col(i) = sf.A.col(basis[i]);
        cB[i] = sf.c[basis[i]];
    }
    Eigen::PartialPivLU<MatrixXd> lu(B);
    const VectorXd xB = lu.solve(sf.b);
    const double tol = 1e-9 * (1.0 + sf.b.norm());
    if (xB.minCoeff() < -tol) return res;
    const VectorXd lambda = lu.transpose().solve(cB);
    const VectorXd red = sf.c - sf.A.transpose() * lambda;
    if (red.minCoeff() < -1e-9 * (1.0 + sf.c.norm())) return res;

    res.x = VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) res.x[basis[i]] = std::max(xB[i], 0.0);
    res.lambda = lambda;
    res.status = LPStatus::optimal;
    res.gap = std::abs(sf.c.dot(res.x) - sf.b.dot(lambda)) / (1.0 + std::abs(sf.c.dot(res.x)));
    return res;
}

// Two-phase dense tableau simplex with Bland's rule. Exact-ish classifier
// for the small instances where the interior point stalls. The tableau is
// rebuilt from the original data every few dozen pivots (and before any
// termination verdict) because elimination updates drift badly on
// ill-conditioned data.
CoreResult simplex(const StandardForm& sf, const LPOptions& opt) {
    const int m = static_cast<int>(sf.b.size());
    const int n = static_cast<int>(sf.c.size());
    CoreResult res;
    if (m == 0) {
        res.x = VectorXd::Zero(n);
        res.status = (n && sf.c.minCoeff() < 0) ? LPStatus::unbounded : LPStatus::optimal;
        res.gap = 0.0;
        return res;
    }

    // Flip rows so b >= 0; columns [original | artificial], rhs kept apart.
    MatrixXd Afull(m, n + m);
    VectorXd b = sf.b;
    Afull.block(0, 0, m, n) = sf.A;
    Afull.block(0, n, m, m) = MatrixXd::Identity(m, m);
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) Afull.row(i).head(n) *= -1.0, b[i] = -b[i];

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    MatrixXd T(m, n + m + 1);
    auto rebuild = [&] {
        MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = Afull.col(basis[i]);
        Eigen::PartialPivLU<MatrixXd> lu(B);
        T.leftCols(n + m) = lu.solve(Afull);
        T.col(n + m) = lu.solve(b);
        for (int i = 0; i < m; ++i)  // wipe roundoff in basic values
            if (T(i, n + m) < 0 && T(i, n + m) > -1e-9) T(i, n + m) = 0.0;
    };
    rebuild();

    auto run_phase = [&](const VectorXd& cost, bool allow_artificial) -> bool {
        // Returns false on unbounded.
        const long long pivot_cap = 200000;
        const int refactor_every = 1;
        int since_rebuild = 0;
        for (long long pivots = 0; pivots < pivot_cap; ++pivots) {
            VectorXd cb(m);
            for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
            int enter = -1;
            const int limit = allow_artificial ? n + m : n;
            for (int j = 0; j < limit; ++j) {
                const double red = cost[j] - cb.dot(T.col(j));
                if (red < -1e-10) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            }
            if (enter < 0) {
                if (since_rebuild == 0) return true;  // verified on a fresh tableau
                rebuild();
                since_rebuild = 0;
                continue;
            }
            int leave = -1;
            double best = kInf;
            for (int i = 0; i < m; ++i) {
                if (T(i, enter) > 1e-11) {
                    const double ratio = std::max(T(i, n + m), 0.0) / T(i, enter);
                    if (ratio < best - 1e-12 ||
                        (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) {
                if (since_rebuild == 0) return false;
                rebuild();
                since_rebuild = 0;
                continue;
            }
            T.row(leave) /= T(leave, enter);
            for (int i = 0; i < m; ++i)
                if (i != leave && std::abs(T(i, enter)) > 0) T.row(i) -= T(i, enter) * T.row(leave);
            basis[leave] = enter;
            if (++since_rebuild >= refactor_every) {
                rebuild();
                since_rebuild = 0;
            }
        }
        throw SolverFailure("simplex: pivot cap exceeded");
    };

    VectorXd phase1_cost = VectorXd::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    run_phase(phase1_cost, true);
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) art_sum += std::abs(T(i, n + m));
    if (art_sum > 1e-7 * (1.0 + b.norm())) {
        res.status = LPStatus::infeasible;
        return res;
    }

    VectorXd phase2_cost = VectorXd::Zero(n + m);
    phase2_cost.head(n) = sf.c;
    const bool bounded = run_phase(phase2_cost, false);
    if (!bounded) {
        res.status = LPStatus::unbounded;
        return res;
    }

    rebuild();
    res.x = VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = std::max(T(i, n + m), 0.0);
    // Duals from B' lambda = c_B using the original columns (unflipped rows).
    MatrixXd B(m, m);
    VectorXd cB(m);
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) {
            B.col(i) = sf.A.col(basis[i]);
            cB[i] = sf.c[basis[i]];
        } else {
            B.col(i) = VectorXd::Unit(m, basis[i] - n);
            cB[i] = 0.0;
        }
    }
    res.lambda = B.transpose().partialPivLu().solve(cB);
    res.status = LPStatus::optimal;
    res.gap = std::abs(sf.c.dot(res.x) - sf.b.dot(res.lambda)) / (1.0 + std::abs(sf.c.dot(res.x)));
    (void)opt;
    return res;
}

// Geometric-mean row/column equilibration; returns scalings so that the
// solved system is A' = Dr A Dc, b' = Dr b, c' = Dc c, x = Dc x', λ = Dr λ'.
void equilibrate(StandardForm& sf, VectorXd& dr, VectorXd& dc) {
    const int m = static_cast<int>(sf.b.size());
    const int n = static_cast<int>(sf.c.size());
    dr = VectorXd::Ones(m);
    dc = VectorXd::Ones(n);
    for (int pass = 0; pass < 4; ++pass) {
        for (int i = 0; i < m; ++i) {
            const double mx = sf.A.row(i).cwiseAbs().maxCoeff();
            if (mx > 0) {
                const double s = 1.0 / std::sqrt(mx);
                sf.A.row(i) *= s;
                sf.b[i] *= s;
                dr[i] *= s;
            }
        }
        for (int j = 0; j < n; ++j) {
            const double mx = sf.A.col(j).cwiseAbs().maxCoeff();
            if (mx > 0) {
                const double s = 1.0 / std::sqrt(mx);
                sf.A.col(j) *= s;
                sf.c[j] *= s;
                dc[j] *= s;
            }
        }
    }
}

}  // namespace

LPSolution solve_lp(const LPProblem& p, const LPOptions& opt) {
    StandardForm sf = to_standard(p);
    VectorXd dr, dc;
    equilibrate(sf, dr, dc);
    const double feas_tol = 1e-7 * (1.0 + sf.b.norm());
    auto feasible = [&](const CoreResult& r) {
        return (sf.A * r.x - sf.b).cwiseAbs().maxCoeff() <= feas_tol && r.x.minCoeff() >= -1e-9;
    };
    CoreResult core = ipm(sf, opt);
    LPSolution out;
    if (core.status != LPStatus::optimal || !feasible(core)) {
        CoreResult vertex = crossover(sf, core);
        if (vertex.status == LPStatus::optimal && feasible(vertex)) {
            vertex.iterations = core.iterations;
            core = vertex;
        } else {
            core = simplex(sf, opt);
            out.used_simplex_fallback = true;
            if (core.status == LPStatus::optimal && !feasible(core))
                throw SolverFailure("solve_lp: simplex basis numerically infeasible");
        }
    }
    if (core.status == LPStatus::optimal) {
        core.x.array() *= dc.array();
        core.lambda.array() *= dr.array();
    }
    out.status = core.status;
    out.iterations = core.iterations;
    out.gap = core.gap;
    if (core.status == LPStatus::optimal) {
        const int N = static_cast<int>(sf.S.cols());
        out.x = sf.S * core.x.head(N) + sf.shift;
        out.objective = p.c.dot(out.x);
        out.dual_eq = core.lambda.head(sf.n_eq);
        out.dual_in = core.lambda.tail(sf.n_in);
        if (!out.x.allFinite()) throw NumericalFailure("solve_lp: non-finite solution");
    }
    return out;
}

L1EqualityResult min_l1_equality(const MatrixXd& V, const VectorXd& w) {
    L1EqualityResult out;
    const int rows = static_cast<int>(V.rows());
    const int f = static_cast<int>(V.cols());
    if (w.size() != rows) throw ContractViolation("min_l1_equality: size mismatch");
    if (f == 0) {  // no equality constraints: r = 0
        out.r = VectorXd::Zero(rows);
        out.objective = 0.0;
        out.ok = true;
        return out;
    }
    const VectorXd c = V.transpose() * w;
    if (c.norm() <= 1e-14 * (1.0 + w.norm())) {
        out.r = VectorXd::Zero(rows);
        out.objective = 0.0;
        out.ok = true;
        return out;
    }

    // Dual: max c'y over the polytope |v_i'y| <= 1 (bounded: V has full
    // column rank). Constraints 0..rows-1 are v_i'y <= 1, rows..2rows-1 are
    // -v_i'y <= 1; all right-hand sides are 1.
    auto grad = [&](int j) -> VectorXd {
        return j < rows ? VectorXd(V.row(j)) : VectorXd(-V.row(j - rows));
    };
    auto is_active = [&](const std::vector<int>& act, int j) {
        return std::find(act.begin(), act.end(), j) != act.end();
    };

    VectorXd y = VectorXd::Zero(f);
    std::vector<int> active;
    active.reserve(f);
    const int cap = 200 + 40 * rows;
    int pivots = 0;

    // Ratio test: furthest step from y along d before a new constraint blocks.
    auto blocking = [&](const VectorXd& d, double& step) -> int {
        int best = -1;
        step = kInf;
        for (int j = 0; j < 2 * rows; ++j) {
            if (is_active(active, j)) continue;
            const double den = grad(j).dot(d);
            if (den <= 1e-12) continue;
            const double t = (1.0 - grad(j).dot(y)) / den;
            if (t < step - 1e-12) {
                step = t;
                best = j;
            }
        }
        return best;
    };

    // Build an initial vertex: walk along the projected objective (or any
    // remaining null direction) until f independent constraints are active.
    MatrixXd Q(f, f);  // orthonormal basis of active gradients, col-grown
    while (static_cast<int>(active.size()) < f) {
        const int k = static_cast<int>(active.size());
        VectorXd d = c - Q.leftCols(k) * (Q.leftCols(k).transpose() * c);
        if (d.norm() <= 1e-12 * (1.0 + c.norm())) {
            d.setZero();
            for (int e = 0; e < f && d.norm() <= 1e-12; ++e) {
                d = VectorXd::Unit(f, e);
                d -= Q.leftCols(k) * (Q.leftCols(k).transpose() * d);
            }
            if (d.norm() <= 1e-12) return out;
        }
        d.normalize();
        double step;
        const int j = blocking(d, step);
        if (j < 0) return out;  // numerically unbounded: give up
        y += step * d;
        VectorXd g = grad(j);
        g -= Q.leftCols(k) * (Q.leftCols(k).transpose() * g);
        if (g.norm() <= 1e-10) return out;
        Q.col(k) = g / g.norm();
        active.push_back(j);
        if (++pivots > cap) return out;
    }

    // Vertex walk: drop the constraint with the most negative multiplier,
    // move along the edge keeping the rest tight, pick up the blocker.
    VectorXd lambda(f);
    while (true) {
        MatrixXd Ga(f, f);
        for (int i = 0; i < f; ++i) Ga.row(i) = grad(active[i]).transpose();
        Eigen::PartialPivLU<MatrixXd> lu(Ga);
        y = lu.solve(VectorXd::Ones(f));  // re-anchor on the vertex: no drift
        lambda = lu.transpose().solve(c);
        int drop = -1;
        for (int i = 0; i < f; ++i)  // Bland: smallest constraint index
            if (lambda[i] < -1e-11 && (drop < 0 || active[i] < active[drop])) drop = i;
        if (drop < 0) break;  // optimal vertex
        const VectorXd d = lu.solve(-VectorXd::Unit(f, drop));
        double step;
        const int j = blocking(d, step);
        if (j < 0 || !std::isfinite(step)) return out;
        y += step * d;
        active[drop] = j;
        if (++pivots > cap) return out;
    }

    // Primal recovery by complementary slackness: the residual lives on the
    // active rows and equals the dual multipliers there (with the constraint
    // orientation as sign), since V'r = Ga'lambda = c by construction.
    VectorXd r = VectorXd::Zero(rows);
    for (int i = 0; i < f; ++i) {
        const int j = active[i];
        r[j < rows ? j : j - rows] += (j < rows ? 1.0 : -1.0) * lambda[i];
    }
    const double dual_obj = c.dot(y);
    const double primal_obj = r.lpNorm<1>();
    const double scale = 1.0 + std::abs(dual_obj);
    if ((V.transpose() * r - c).norm() > 1e-8 * (1.0 + c.norm())) return out;
    if (std::abs(primal_obj - dual_obj) > 1e-8 * scale) return out;

    out.r = std::move(r);
    out.objective = primal_obj;
    out.ok = true;
    return out;
}

}  // namespace bguard::optim
