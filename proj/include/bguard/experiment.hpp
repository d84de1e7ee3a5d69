#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bguard/attack.hpp"
#include "bguard/conditions.hpp"
#include "bguard/recover_convex.hpp"
#include "bguard/system.hpp"

namespace bguard {

struct NoiseSpec {
    enum class Dist { none, gaussian, uniform };
    Dist dist = Dist::none;
    double sigma = 0.0;  // std dev (gaussian) or half-width (uniform)
};

/// Method names accepted in ExperimentConfig::methods. "bruteforce",
/// "adaptive" and "noisy_bilevel" dispatch on the attack kind.
struct ExperimentConfig {
    SystemSpec system;  // continuous or discrete; discretized with ts when continuous
    std::string system_name = "inline";
    double ts = 1.3;
    int T = 11;
    int L = 3;
    int k = 1;
    AttackKind attack_kind = AttackKind::entry;
    double attack_magnitude = 8.0;
    std::optional<std::vector<int>> attack_support;  // fixed entries/channels; random otherwise
    NoiseSpec noise;
    std::vector<std::string> methods = {"bruteforce", "l1"};
    int trials = 1;
    std::uint64_t seed = 1;
    int gpe_redraw_max = 50;
    SolverOpts solver;
    RecoverOptions exact;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct TrialOutcome {
    int index = 0;
    AttackRecord attack;
    Trajectory w_true;
    Trajectory w_received;  // attacked + noise
    std::map<std::string, RecoveryResult> results;
    std::map<std::string, double> rmse;  // recovered vs true, per method
    std::map<std::string, bool> support_identified;
    double attacked_rmse = 0.0;  // received vs true
};

struct MethodAggregate {
    double mean_rmse = 0.0;
    double support_rate = 0.0;  // fraction of trials with exact support identification
    double median_wall_time_s = 0.0;
    double mean_wall_time_s = 0.0;
    int recovered = 0;
    int no_solution = 0;
};

struct Report {
    ExperimentConfig config;
    GpeReport gpe;
    int gpe_redraws = 0;
    std::vector<Certificate> certificates;
    std::vector<TrialOutcome> trials;
    std::map<std::string, MethodAggregate> aggregates;
    double mean_attacked_rmse = 0.0;
    std::string toolkit_version;

    /// Deterministic for fixed config+seed when include_times is false.
    nlohmann::json to_json(bool include_times = true) const;
};

// Building blocks behind run_experiment. The piecewise CLI subcommands
// (simulate -> attack -> recover) call these directly, so composing them
// with the same config reproduces the single-shot report trial by trial.

/// The discrete-time system the experiment runs on (ZOH at cfg.ts when the
/// configured system is continuous).
SystemSpec resolved_system(const ExperimentConfig& cfg);

/// Offline data w_d, redrawn until generalized persistency of excitation
/// holds; throws NumericalFailure after cfg.gpe_redraw_max redraws.
Trajectory offline_data(const ExperimentConfig& cfg, GpeReport* gpe = nullptr,
                        int* redraws = nullptr);

/// One long true run of length trials * L; trial t owns columns [tL, tL+L).
Trajectory online_truth(const ExperimentConfig& cfg);

/// Attack for trial `trial` on its true segment (seeded substream).
AttackRecord trial_attack(const Trajectory& w_true, const ExperimentConfig& cfg, int trial);

/// Measurement noise for trial `trial` (seeded substream).
Trajectory trial_noise(const Trajectory& w, const ExperimentConfig& cfg, int trial);

/// Dispatch one recovery method by name ("bruteforce", "adaptive", "l1",
/// "group_lasso", "noisy_bilevel").
RecoveryResult run_recovery_method(const std::string& name, const HankelMatrix& H,
                                   const Trajectory& w, const ExperimentConfig& cfg);

/// Generate offline data, certify, simulate segments, inject attacks and
/// noise, run every requested method, aggregate. Deterministic per seed.
Report run_experiment(const ExperimentConfig& cfg);

/// Recompute a report's aggregate metrics from its per-trial records and
/// compare; true when everything matches (used by `bench` self-check).
bool report_self_consistent(const Report& report, double tol = 1e-12);

/// Tidy long-format plot data: time, variable, series, value.
void write_plot_csv(std::ostream& os, const Report& report, int trial_index);

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace bguard
