// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS / FAIL line; the process exits nonzero when any of them fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bguard/attack.hpp"
#include "bguard/conditions.hpp"
#include "bguard/experiment.hpp"
#include "bguard/recover_convex.hpp"
#include "bguard/recover_exact.hpp"
#include "test_util.hpp"

using namespace bguard;
namespace tu = bguard::testutil;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d [%s] %s (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Uniform perturbation of absolute value in [mag/2, mag], random sign.
double perturbation(double magnitude, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(magnitude / 2.0, magnitude);
    std::bernoulli_distribution sign(0.5);
    return (sign(rng) ? 1.0 : -1.0) * mag(rng);
}

// Rows of the 3-mass Hankel whose single-entry recovery is certified by the
// induced-1-norm bound (draw-invariant given excitation, but recomputed).
std::vector<int> certified_entries(const HankelMatrix& H) {
    std::vector<int> out;
    for (int row = 1; row <= H.rows(); ++row) {
        const IndexSet C({row}, H.rows());
        if (check_condition3(H, C).holds() && t_matrix_certificate(H, C).holds())
            out.push_back(row);
    }
    return out;
}

void criterion1_excitation() {
    const auto t0 = Clock::now();
    const SystemSpec sys = tu::chain3_discrete();
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto gen = substream(seed, Stream::data, 0);
        const MatrixXd u = tu::gaussian_inputs(sys.m(), 11, gen);
        std::normal_distribution<double> dist(0.0, 1.0);
        VectorXd x0(sys.n());
        for (int i = 0; i < sys.n(); ++i) x0[i] = dist(gen);
        const GpeReport rep = check_gpe(build_hankel(simulate(sys, u, x0), 3), sys.m(), sys.n());
        if (rep.holds && rep.rank == 9 && rep.gap_ratio >= 1e6) ++ok;
    }
    const double dt = seconds_since(t0);
    report(1, ok >= 99 && dt < 1.0, "3-mass excitation: rank 9 with a wide spectral gap",
           std::to_string(ok) + "/100 draws, " + std::to_string(dt) + " s");
}

void criterion2_entry_recovery() {
    const SystemSpec sys = tu::chain3_discrete();
    int exact = 0, attack_redraws = 0, data_redraws = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        int dr = 0;
        const HankelMatrix H = build_hankel(tu::gpe_data(sys, 11, 3, 1000 + trial, &dr), 3);
        data_redraws += dr;
        const Trajectory w_bar = tu::true_window(sys, 3, 1000 + trial);
        // Attacks whose row is not individually redundant in the data are
        // silently consistent and no method can see them; redraw those,
        // reporting how often it happens.
        AttackRecord rec = entry_attack_random(w_bar, 1, 8.0, trial);
        while (!check_condition3(H, rec.support).holds()) {
            ++attack_redraws;
            rec = entry_attack_random(w_bar, 1, 8.0, rec.seed + 7919);
        }
        const RecoveryResult res = recover_entries_bruteforce(H, rec.w, 1);
        if (res.status == RecoveryStatus::recovered && tu::rel_inf_err(res.w_tilde, w_bar) <= 1e-8)
            ++exact;
    }
    report(2, exact == 100, "noiseless single-entry recovery is exact",
           std::to_string(exact) + "/100 exact, " + std::to_string(data_redraws) +
               " data redraws, " + std::to_string(attack_redraws) + " attack redraws");
}

void criterion3_channel_recovery() {
    const SystemSpec sys = tu::chain3_discrete();
    // L = 4: with L = 3 length-3 windows of this system satisfy
    // q*L - L = m*L + n, so removing any single channel leaves a full-rank
    // square system, every candidate drop is consistent, and whole-channel
    // attacks are structurally undetectable. One extra block restores the
    // redundancy channel recovery relies on.
    const int L = 4, T = 14;
    int exact = 0, attack_redraws = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const HankelMatrix H = build_hankel(tu::gpe_data(sys, T, L, 2000 + trial), L);
        const Trajectory w_bar = tu::true_window(sys, L, 2000 + trial);
        auto rng = substream(trial, Stream::attack, 3);
        int ch = 0;
        for (int tries = 0;; ++tries) {
            std::uniform_int_distribution<int> pick(sys.m() + 1, sys.q());  // output channels
            ch = pick(rng);
            if (check_condition3(H, periodical_set(IndexSet({ch}, sys.q()), sys.q(), L)).holds())
                break;
            ++attack_redraws;
        }
        Trajectory w = w_bar;
        for (int t = 0; t < L; ++t) w.samples(ch - 1, t) += perturbation(8.0, rng);
        const RecoveryResult res = recover_channels_bruteforce(H, w, 1);
        if (res.status == RecoveryStatus::recovered && tu::rel_inf_err(res.w_tilde, w_bar) <= 1e-8)
            ++exact;
    }
    report(3, exact == 100, "noiseless single-output-channel recovery is exact",
           std::to_string(exact) + "/100 exact, " + std::to_string(attack_redraws) +
               " attack redraws");
}

void criterion4_convex_equivalence() {
    const SystemSpec chain = tu::chain3_discrete();
    int entry_match = 0, entry_total = 0;
    for (std::uint64_t seed = 0; entry_total < 100 && seed < 400; ++seed) {
        const HankelMatrix H = build_hankel(tu::gpe_data(chain, 11, 3, 3000 + seed), 3);
        const auto entries = certified_entries(H);
        if (entries.empty()) continue;
        auto rng = substream(seed, Stream::attack, 4);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(entries.size()) - 1);
        const int row = entries[pick(rng)];
        const Trajectory w_bar = tu::true_window(chain, 3, 3000 + seed);
        VectorXd w = w_bar.stacked();
        w[to0(row)] += perturbation(8.0, rng);
        const Trajectory received = Trajectory::from_stacked(chain.q(), w);
        const RecoveryResult l1 = recover_l1(H, received);
        const RecoveryResult bf = recover_entries_bruteforce(H, received, 1);
        ++entry_total;
        if (l1.status == RecoveryStatus::recovered && bf.status == RecoveryStatus::recovered &&
            (l1.w_tilde.samples - bf.w_tilde.samples).cwiseAbs().maxCoeff() <=
                1e-6 * bf.w_tilde.samples.cwiseAbs().maxCoeff())
            ++entry_match;
    }

    int ch_match = 0, ch_total = 0;
    for (std::uint64_t seed = 0; ch_total < 100 && seed < 400; ++seed) {
        const SystemSpec sys = tu::random_observable(2, 1, 3, 5000 + seed);
        HankelMatrix H;
        try {
            H = build_hankel(tu::gpe_data(sys, 14, 3, 5000 + seed), 3);
        } catch (const NumericalFailure&) {
            continue;
        }
        auto rng = substream(seed, Stream::attack, 5);
        std::vector<int> certified;
        for (int ch = 1; ch <= sys.q(); ++ch) {
            const IndexSet rows = periodical_set(IndexSet({ch}, sys.q()), sys.q(), 3);
            if (check_condition3(H, rows).holds() && t_matrix_certificate(H, rows).holds())
                certified.push_back(ch);
        }
        if (certified.empty()) continue;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(certified.size()) - 1);
        const int ch = certified[pick(rng)];
        Trajectory w = tu::true_window(sys, 3, 5000 + seed);
        const Trajectory w_bar = w;
        for (int t = 0; t < 3; ++t) w.samples(ch - 1, t) += perturbation(8.0, rng);
        const RecoveryResult gl = recover_group_lasso(H, w);
        const RecoveryResult bf = recover_channels_bruteforce(H, w, 1);
        ++ch_total;
        if (gl.status == RecoveryStatus::recovered && bf.status == RecoveryStatus::recovered &&
            (gl.w_tilde.samples - bf.w_tilde.samples).cwiseAbs().maxCoeff() <=
                1e-5 * bf.w_tilde.samples.cwiseAbs().maxCoeff())
            ++ch_match;
    }
    report(4, entry_match == 100 && ch_match == 100,
           "convex relaxations match brute force on certified instances",
           "l1 " + std::to_string(entry_match) + "/" + std::to_string(entry_total) +
               ", group lasso " + std::to_string(ch_match) + "/" + std::to_string(ch_total));
}

void criterion5_tightness() {
    const SystemSpec sys = tu::chain3_discrete();
    const HankelMatrix H = build_hankel(tu::gpe_data(sys, 11, 3, 71), 3);
    const Trajectory w_bar = tu::true_window(sys, 3, 71);

    const AttackRecord entry = adversarial_entry_attack(H, w_bar, 1);
    const RecoveryResult r1 = recover_entries_bruteforce(H, entry.w, 1);
    const bool entry_fooled = r1.status == RecoveryStatus::recovered &&
                              (r1.w_tilde.samples - w_bar.samples).cwiseAbs().maxCoeff() > 1e-3;

    const AttackRecord channel = adversarial_channel_attack(H, w_bar, 1);
    const RecoveryResult r2 = recover_channels_bruteforce(H, channel.w, 1);
    const bool channel_fooled = r2.status == RecoveryStatus::recovered &&
                                (r2.w_tilde.samples - w_bar.samples).cwiseAbs().maxCoeff() > 1e-3;

    report(5, entry_fooled && channel_fooled,
           "adversarial attacks defeat the scan when the row conditions fail",
           std::string("entry ") + (entry_fooled ? "fooled" : "caught") + ", channel " +
               (channel_fooled ? "fooled" : "caught"));
}

void criterion6_critical_set_bound() {
    int size_ok = 0, infeasible_k_fails = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        // Observable systems with qL <= 12.
        const int p = 1 + i % 3;
        const int n = 2 + (i / 3) % 2;
        const int q = p + 1;
        const int L = std::min(3, 12 / q);
        const SystemSpec sys = tu::random_observable(n, 1, p, 9000 + i);
        const int T = std::max(4 * (L + n), 12);
        HankelMatrix H;
        try {
            H = build_hankel(tu::gpe_data(sys, T, L, 9000 + i), L);
        } catch (const NumericalFailure&) {
            continue;  // counts as a failure via the totals below
        }
        if (min_critical_row_set(H.entries).size() <= p + 1) ++size_ok;
        if (check_condition1(H, p / 2 + 1).status == CertStatus::fails) ++infeasible_k_fails;
    }
    report(6, size_ok == total && infeasible_k_fails == total,
           "minimum critical sets stay within p + 1 and k > p/2 is never certified",
           "size bound " + std::to_string(size_ok) + "/50, over-budget failures " +
               std::to_string(infeasible_k_fails) + "/50");
}

void criterion7_noisy_bilevel() {
    const SystemSpec sys = tu::chain3_discrete();
    const double sigma = 0.5, magnitude = 8.0;

    const HankelMatrix H = build_hankel(tu::gpe_data(sys, 11, 3, 81), 3);
    const auto entries = certified_entries(H);
    int support_hits = 0, improved = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto rng = substream(trial, Stream::attack, 7);
        const Trajectory w_bar = tu::true_window(sys, 3, 7000 + trial);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(entries.size()) - 1);
        const int row = entries[pick(rng)];
        VectorXd w = w_bar.stacked();
        w[to0(row)] += perturbation(magnitude, rng);
        auto noise_rng = substream(trial, Stream::noise, 7);
        std::normal_distribution<double> noise(0.0, sigma);
        for (int i = 0; i < w.size(); ++i) w[i] += noise(noise_rng);
        const Trajectory received = Trajectory::from_stacked(sys.q(), w);
        const RecoveryResult res = recover_noisy_entries(H, received, 1);
        if (res.status != RecoveryStatus::recovered) continue;
        if (res.selected.complement().indices == std::vector<int>{row}) ++support_hits;
        if (tu::rmse(res.w_tilde, w_bar) < tu::rmse(received, w_bar)) ++improved;
    }

    // Channel variant, restricted to channels whose corruption the group
    // residual ranking can single out at all: a noiseless probe checks that
    // the attacked channel carries the dominant group residual. Channels
    // failing the probe are invisible to any residual-based selector here.
    std::vector<int> eligible;
    for (int ch = sys.m() + 1; ch <= sys.q(); ++ch) {
        auto rng = substream(4242, Stream::attack, static_cast<std::uint64_t>(ch));
        Trajectory probe = tu::true_window(sys, 3, 4242);
        for (int t = 0; t < 3; ++t) probe.samples(ch - 1, t) += perturbation(magnitude, rng);
        const RecoveryResult r = recover_group_lasso(H, probe);
        int argmax = 0;
        if (r.status == RecoveryStatus::recovered && r.group_norms.size() == sys.q()) {
            r.group_norms.maxCoeff(&argmax);
            if (argmax + 1 == ch) eligible.push_back(ch);
        }
    }
    int ch_hits = 0;
    if (!eligible.empty()) {
        for (std::uint64_t trial = 0; trial < 200; ++trial) {
            auto rng = substream(trial, Stream::attack, 8);
            const Trajectory w_bar = tu::true_window(sys, 3, 8000 + trial);
            std::uniform_int_distribution<int> pick(0, static_cast<int>(eligible.size()) - 1);
            const int ch = eligible[pick(rng)];
            Trajectory w = w_bar;
            for (int t = 0; t < 3; ++t) w.samples(ch - 1, t) += perturbation(magnitude, rng);
            auto noise_rng = substream(trial, Stream::noise, 8);
            std::normal_distribution<double> noise(0.0, sigma);
            for (int i = 0; i < w.samples.size(); ++i)
                w.samples(i % w.q, i / w.q) += noise(noise_rng);
            const RecoveryResult res = recover_noisy_channels(H, w, 1);
            if (res.status != RecoveryStatus::recovered) continue;
            const IndexSet expect = periodical_set(IndexSet({ch}, sys.q()), sys.q(), 3);
            if (res.selected.complement().indices == expect.indices) ++ch_hits;
        }
    }
    const bool pass = support_hits >= 180 && improved >= 190 && ch_hits >= 170;
    report(7, pass, "noisy bi-level recovery finds supports and improves the data",
           "entry support " + std::to_string(support_hits) + "/200, improved " +
               std::to_string(improved) + "/200, channel support " + std::to_string(ch_hits) +
               "/200");
}

void criterion8_timing() {
    const SystemSpec sys = tu::chain3_discrete();
    const HankelMatrix H = build_hankel(tu::gpe_data(sys, 11, 3, 91), 3);
    std::vector<double> t_l1, t_bf;
    for (std::uint64_t run = 0; run < 50; ++run) {
        const Trajectory w_bar = tu::true_window(sys, 3, 9100 + run);
        const AttackRecord rec = entry_attack_random(w_bar, 1, 8.0, run);
        t_l1.push_back(recover_l1(H, rec.w).wall_time_s);
        t_bf.push_back(recover_entries_bruteforce(H, rec.w, 1).wall_time_s);
    }
    std::sort(t_l1.begin(), t_l1.end());
    std::sort(t_bf.begin(), t_bf.end());
    const double m_l1 = t_l1[25], m_bf = t_bf[25];
    report(8, m_l1 * 2.0 <= m_bf, "l1 recovery is at least twice as fast as the scan",
           "median l1 " + std::to_string(m_l1 * 1e6) + " us, scan " +
               std::to_string(m_bf * 1e6) + " us");
}

void criterion9_scaling() {
    const std::vector<int> sizes{3, 10, 20, 30};
    std::vector<double> med_times;
    bool all_recovered = true;
    std::string detail;
    for (int n : sizes) {
        ExperimentConfig cfg;
        cfg.system = mass_spring_chain(n);
        cfg.system_name = "mass_spring_chain:" + std::to_string(n);
        cfg.ts = 1.3;
        cfg.T = n == 3 ? 11 : 8 * n;
        cfg.L = 3;
        cfg.k = 1;
        cfg.attack_kind = AttackKind::entry;
        cfg.attack_magnitude = 8.0;
        cfg.methods = {"l1"};
        cfg.trials = 50;
        cfg.seed = 1234;
        const Report rep = run_experiment(cfg);
        const MethodAggregate& agg = rep.aggregates.at("l1");
        if (agg.recovered != cfg.trials) all_recovered = false;
        med_times.push_back(agg.median_wall_time_s);
        detail += "n=" + std::to_string(n) + ": " + std::to_string(agg.median_wall_time_s * 1e3) +
                  " ms; ";
    }
    // Log-log regression slope of median time against n.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int N = static_cast<int>(sizes.size());
    for (int i = 0; i < N; ++i) {
        const double x = std::log(sizes[i]), y = std::log(med_times[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    detail += "slope " + std::to_string(slope);
    report(9, all_recovered && slope <= 3.5,
           "convex recovery scales sub-cubically across chain sizes", detail);
}

void criterion10_certificate_implications() {
    int t_norm_cases = 0, epigraph_violations = 0;
    int cond2_cases = 0, cond3_violations = 0;
    const SystemSpec chain = tu::chain3_discrete();
    for (std::uint64_t i = 0; i < 200; ++i) {
        if (i % 2 == 0) {
            // Induced-norm certificate => epigraph certificate, on mixed
            // single/double row supports with condition 3.
            const bool use_chain = (i % 4 == 0);
            SystemSpec sys = use_chain ? chain : tu::random_observable(2, 1, 3, 20000 + i);
            HankelMatrix H;
            try {
                H = build_hankel(tu::gpe_data(sys, use_chain ? 11 : 14, 3, 20000 + i), 3);
            } catch (const NumericalFailure&) {
                continue;
            }
            auto rng = substream(i, Stream::misc, 10);
            std::uniform_int_distribution<int> pick(1, H.rows());
            std::vector<int> rows{pick(rng)};
            if (i % 3 == 0) rows.push_back(pick(rng));
            const IndexSet C(rows, H.rows());
            if (!check_condition3(H, C).holds()) continue;
            const Certificate tn = t_matrix_certificate(H, C);
            if (!tn.holds()) continue;
            ++t_norm_cases;
            const Certificate ep =
                epigraph_certificate(restrict_rows(H, C.complement()), restrict_rows(H, C));
            if (!ep.holds()) ++epigraph_violations;
        } else {
            // Condition 2 => condition 3 for every channel subset of size
            // <= 2k. Output-only systems give non-vacuous condition 2.
            const int n = 2, p = 4 + static_cast<int>(i % 2);
            SystemSpec sys = tu::random_observable(n, 0, p, 30000 + i);
            HankelMatrix H;
            try {
                H = build_hankel(tu::gpe_data(sys, 16, 2, 30000 + i), 2);
            } catch (const NumericalFailure&) {
                continue;
            }
            const int k = 1;
            if (!check_condition2(H, k).holds()) continue;
            ++cond2_cases;
            for (int a = 1; a <= sys.q(); ++a)
                for (int b = a; b <= sys.q(); ++b) {
                    std::vector<int> chans{a};
                    if (b != a) chans.push_back(b);
                    const IndexSet rows =
                        periodical_set(IndexSet(chans, sys.q()), sys.q(), H.L);
                    if (!check_condition3(H, rows).holds()) ++cond3_violations;
                }
        }
    }
    const bool pass = epigraph_violations == 0 && cond3_violations == 0 && t_norm_cases >= 30 &&
                      cond2_cases >= 30;
    report(10, pass, "certificate implications hold with zero violations",
           std::to_string(t_norm_cases) + " norm certificates, " +
               std::to_string(epigraph_violations) + " epigraph violations; " +
               std::to_string(cond2_cases) + " condition-2 passes, " +
               std::to_string(cond3_violations) + " condition-3 violations");
}

}  // namespace

int main() {
    criterion1_excitation();
    criterion2_entry_recovery();
    criterion3_channel_recovery();
    criterion4_convex_equivalence();
    criterion5_tightness();
    criterion6_critical_set_bound();
    criterion7_noisy_bilevel();
    criterion8_timing();
    criterion9_scaling();
    criterion10_certificate_implications();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
