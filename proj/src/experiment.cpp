#include "bguard/experiment.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "bguard/io.hpp"
#include "bguard/rng.hpp"

namespace bguard {
namespace {

using nlohmann::json;

MatrixXd gaussian_inputs(int m, int len, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXd u(m, len);
    for (int c = 0; c < len; ++c)
        for (int r = 0; r < m; ++r) u(r, c) = dist(rng);
    return u;
}

Trajectory add_noise(const Trajectory& w, const NoiseSpec& noise, std::mt19937_64& rng) {
    if (noise.dist == NoiseSpec::Dist::none) return w;
    MatrixXd s = w.samples;
    if (noise.dist == NoiseSpec::Dist::gaussian) {
        std::normal_distribution<double> dist(0.0, noise.sigma);
        for (int c = 0; c < s.cols(); ++c)
            for (int r = 0; r < s.rows(); ++r) s(r, c) += dist(rng);
    } else {
        std::uniform_real_distribution<double> dist(-noise.sigma, noise.sigma);
        for (int c = 0; c < s.cols(); ++c)
            for (int r = 0; r < s.rows(); ++r) s(r, c) += dist(rng);
    }
    return Trajectory(w.q, std::move(s));
}

AttackRecord make_attack(const Trajectory& w_bar, const ExperimentConfig& cfg,
                         std::uint64_t trial_seed) {
    if (!cfg.attack_support) {
        return cfg.attack_kind == AttackKind::entry
                   ? entry_attack_random(w_bar, cfg.k, cfg.attack_magnitude, trial_seed)
                   : channel_attack_random(w_bar, cfg.k, cfg.attack_magnitude, trial_seed);
    }
    // Fixed support, random magnitudes.
    const int q = w_bar.q, L = w_bar.length();
    const int universe = cfg.attack_kind == AttackKind::entry ? q * L : q;
    const IndexSet support(*cfg.attack_support, universe);
    if (support.size() > cfg.k)
        throw ContractViolation("make_attack: fixed support larger than k");
    auto rng = std::mt19937_64(trial_seed);
    std::uniform_real_distribution<double> mag(cfg.attack_magnitude / 2.0, cfg.attack_magnitude);
    std::bernoulli_distribution sign(0.5);
    VectorXd w = w_bar.stacked();
    const IndexSet rows = cfg.attack_kind == AttackKind::entry
                              ? support
                              : periodical_set(support, q, L);
    for (int idx : rows.indices) w[to0(idx)] += (sign(rng) ? 1.0 : -1.0) * mag(rng);
    AttackRecord rec{Trajectory::from_stacked(q, w), support, cfg.attack_kind,
                     cfg.attack_magnitude, trial_seed, cfg.k};
    return rec;
}

double rmse(const Trajectory& a, const Trajectory& b) {
    return (a.samples - b.samples).norm() / std::sqrt(static_cast<double>(a.samples.size()));
}

// Exact support identification: the rows a method dropped must equal the
// rows the attack actually touched.
bool identifies_support(const RecoveryResult& res, const AttackRecord& attack, int q, int L) {
    if (res.status != RecoveryStatus::recovered || res.selected.universe != q * L) return false;
    const IndexSet dropped = res.selected.complement();
    const IndexSet attacked_rows = attack.kind == AttackKind::entry
                                       ? attack.support
                                       : periodical_set(attack.support, q, L);
    return dropped.indices == attacked_rows.indices;
}

RecoveryResult run_method(const std::string& name, const HankelMatrix& H, const Trajectory& w,
                          const ExperimentConfig& cfg) {
    if (name == "bruteforce")
        return cfg.attack_kind == AttackKind::entry
                   ? recover_entries_bruteforce(H, w, cfg.k, cfg.exact)
                   : recover_channels_bruteforce(H, w, cfg.k, cfg.exact);
    if (name == "adaptive") return recover_adaptive(H, w, cfg.k, cfg.attack_kind, cfg.exact);
    if (name == "l1") return recover_l1(H, w, cfg.solver);
    if (name == "group_lasso") return recover_group_lasso(H, w, cfg.solver);
    if (name == "noisy_bilevel")
        return cfg.attack_kind == AttackKind::entry
                   ? recover_noisy_entries(H, w, cfg.k, cfg.solver)
                   : recover_noisy_channels(H, w, cfg.k, cfg.solver);
    throw ContractViolation("run_experiment: unknown method '" + name + "'");
}

json strip_times(json j) {
    j.erase("wall_time_s");
    return j;
}

}  // namespace

SystemSpec resolved_system(const ExperimentConfig& cfg) {
    return cfg.system.time_kind == TimeKind::continuous ? discretize_zoh(cfg.system, cfg.ts)
                                                        : cfg.system;
}

Trajectory offline_data(const ExperimentConfig& cfg, GpeReport* gpe, int* redraws) {
    const SystemSpec sys = resolved_system(cfg);
    for (int redraw = 0;; ++redraw) {
        auto rng = substream(cfg.seed, Stream::data, static_cast<std::uint64_t>(redraw));
        Trajectory w_d = simulate(sys, gaussian_inputs(sys.m(), cfg.T, rng), VectorXd::Zero(sys.n()));
        const GpeReport rep = check_gpe(build_hankel(w_d, cfg.L), sys.m(), sys.n());
        if (rep.holds) {
            if (gpe) *gpe = rep;
            if (redraws) *redraws = redraw;
            return w_d;
        }
        if (redraw >= cfg.gpe_redraw_max)
            throw NumericalFailure(
                "offline_data: generalized persistency of excitation failed after " +
                std::to_string(redraw + 1) + " draws (rank " + std::to_string(rep.rank) +
                ", target " + std::to_string(rep.target) + "); recovery guarantees void");
    }
}

Trajectory online_truth(const ExperimentConfig& cfg) {
    const SystemSpec sys = resolved_system(cfg);
    auto rng = substream(cfg.seed, Stream::data, 1u << 20);
    return simulate(sys, gaussian_inputs(sys.m(), cfg.trials * cfg.L, rng),
                    VectorXd::Zero(sys.n()));
}

AttackRecord trial_attack(const Trajectory& w_true, const ExperimentConfig& cfg, int trial) {
    auto rng = substream(cfg.seed, Stream::attack, static_cast<std::uint64_t>(trial));
    return make_attack(w_true, cfg, rng());
}

Trajectory trial_noise(const Trajectory& w, const ExperimentConfig& cfg, int trial) {
    auto rng = substream(cfg.seed, Stream::noise, static_cast<std::uint64_t>(trial));
    return add_noise(w, cfg.noise, rng);
}

RecoveryResult run_recovery_method(const std::string& name, const HankelMatrix& H,
                                   const Trajectory& w, const ExperimentConfig& cfg) {
    return run_method(name, H, w, cfg);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const json& sys = j.at("system");
    if (sys.contains("preset")) {
        const std::string preset = sys.at("preset").get<std::string>();
        const auto colon = preset.find(':');
        if (preset.substr(0, colon) != "mass_spring_chain" || colon == std::string::npos)
            throw ContractViolation("config: unknown system preset '" + preset + "'");
        cfg.system = mass_spring_chain(std::stoi(preset.substr(colon + 1)));
        cfg.system_name = preset;
    } else {
        cfg.system = io::system_from_json(sys);
    }
    cfg.ts = j.value("ts", cfg.ts);
    cfg.T = j.value("T", cfg.T);
    cfg.L = j.value("L", cfg.L);
    cfg.k = j.value("k", cfg.k);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("attack")) {
        const json& a = j.at("attack");
        const std::string kind = a.value("kind", "entry");
        if (kind != "entry" && kind != "channel")
            throw ContractViolation("config: unknown attack kind");
        cfg.attack_kind = kind == "entry" ? AttackKind::entry : AttackKind::channel;
        cfg.attack_magnitude = a.value("magnitude", cfg.attack_magnitude);
        if (a.contains("support")) cfg.attack_support = a.at("support").get<std::vector<int>>();
    }
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        const std::string dist = n.value("distribution", "none");
        if (dist == "gaussian")
            cfg.noise.dist = NoiseSpec::Dist::gaussian;
        else if (dist == "uniform")
            cfg.noise.dist = NoiseSpec::Dist::uniform;
        else if (dist == "none")
            cfg.noise.dist = NoiseSpec::Dist::none;
        else
            throw ContractViolation("config: unknown noise distribution");
        cfg.noise.sigma = n.value("sigma", 0.0);
    }
    if (cfg.trials < 1) throw ContractViolation("config: trial count must be >= 1");
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    json noise_j{{"distribution", noise.dist == NoiseSpec::Dist::none       ? "none"
                                  : noise.dist == NoiseSpec::Dist::gaussian ? "gaussian"
                                                                            : "uniform"},
                 {"sigma", noise.sigma}};
    json attack_j{{"kind", io::attack_kind_name(attack_kind)}, {"magnitude", attack_magnitude}};
    if (attack_support) attack_j["support"] = *attack_support;
    return json{{"system", system_name == "inline" ? io::to_json(system) : json{{"preset", system_name}}},
                {"ts", ts},
                {"T", T},
                {"L", L},
                {"k", k},
                {"attack", attack_j},
                {"noise", noise_j},
                {"methods", methods},
                {"trials", trials},
                {"seed", seed}};
}

Report run_experiment(const ExperimentConfig& cfg) {
    Report report;
    report.config = cfg;
    report.toolkit_version = kToolkitVersion;

    const SystemSpec sys = resolved_system(cfg);

    // Offline data; redrawn until the excitation condition holds.
    const Trajectory w_d = offline_data(cfg, &report.gpe, &report.gpe_redraws);
    const HankelMatrix H = build_hankel(w_d, cfg.L);

    // Offline certificates for the drawn data.
    report.certificates.push_back(cfg.attack_kind == AttackKind::entry
                                      ? check_condition1(H, cfg.k)
                                      : check_condition2(H, cfg.k));
    if (cfg.attack_support) {
        const int universe = cfg.attack_kind == AttackKind::entry ? H.rows() : H.q;
        const IndexSet support(*cfg.attack_support, universe);
        const IndexSet rows = cfg.attack_kind == AttackKind::entry
                                  ? support
                                  : periodical_set(support, H.q, cfg.L);
        const Certificate cond3 = check_condition3(H, rows);
        report.certificates.push_back(cond3);
        if (cond3.holds()) report.certificates.push_back(t_matrix_certificate(H, rows));
    }

    // True trajectory: one long run, split into consecutive non-overlapping
    // length-L segments (one per trial).
    const Trajectory w_long = online_truth(cfg);

    report.trials.resize(cfg.trials);
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        try {
            TrialOutcome& out = report.trials[t];
            out.index = t;
            out.w_true = Trajectory(sys.q(), w_long.samples.middleCols(t * cfg.L, cfg.L));
            out.attack = trial_attack(out.w_true, cfg, t);
            out.w_received = trial_noise(out.attack.w, cfg, t);
            out.attacked_rmse = rmse(out.w_received, out.w_true);
            for (const auto& method : cfg.methods) {
                RecoveryResult res = run_method(method, H, out.w_received, cfg);
                out.rmse[method] = res.status == RecoveryStatus::recovered
                                       ? rmse(res.w_tilde, out.w_true)
                                       : std::numeric_limits<double>::quiet_NaN();
                out.support_identified[method] = identifies_support(res, out.attack, H.q, cfg.L);
                out.results[method] = std::move(res);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            error = e.what();
        }
    }
    if (!error.empty()) throw NumericalFailure("run_experiment: trial failed: " + error);

    // Aggregates.
    double att = 0.0;
    for (const auto& t : report.trials) att += t.attacked_rmse;
    report.mean_attacked_rmse = att / cfg.trials;
    for (const auto& method : cfg.methods) {
        MethodAggregate agg;
        std::vector<double> times;
        double rmse_sum = 0.0;
        int rmse_count = 0, support_hits = 0;
        for (const auto& t : report.trials) {
            const auto& res = t.results.at(method);
            times.push_back(res.wall_time_s);
            if (res.status == RecoveryStatus::recovered) {
                ++agg.recovered;
                rmse_sum += t.rmse.at(method);
                ++rmse_count;
            } else {
                ++agg.no_solution;
            }
            support_hits += t.support_identified.at(method) ? 1 : 0;
        }
        agg.mean_rmse = rmse_count ? rmse_sum / rmse_count : 0.0;
        agg.support_rate = static_cast<double>(support_hits) / cfg.trials;
        std::sort(times.begin(), times.end());
        agg.median_wall_time_s = times[times.size() / 2];
        agg.mean_wall_time_s = 0.0;
        for (double x : times) agg.mean_wall_time_s += x;
        agg.mean_wall_time_s /= times.size();
        report.aggregates[method] = agg;
    }
    return report;
}

nlohmann::json Report::to_json(bool include_times) const {
    json trials_j = json::array();
    for (const auto& t : trials) {
        json results_j;
        for (const auto& [name, res] : t.results) {
            json r = io::to_json(res);
            if (!include_times) r = strip_times(std::move(r));
            results_j[name] = std::move(r);
        }
        json rmse_j;
        for (const auto& [name, v] : t.rmse)
            rmse_j[name] = std::isfinite(v) ? json(v) : json(nullptr);
        json support_j;
        for (const auto& [name, v] : t.support_identified) support_j[name] = v;
        trials_j.push_back(json{{"index", t.index},
                                {"attack", io::to_json(t.attack)},
                                {"attacked_rmse", t.attacked_rmse},
                                {"rmse", rmse_j},
                                {"support_identified", support_j},
                                {"results", results_j}});
    }
    json aggregates_j;
    for (const auto& [name, agg] : aggregates) {
        json a{{"mean_rmse", agg.mean_rmse},
               {"support_rate", agg.support_rate},
               {"recovered", agg.recovered},
               {"no_solution", agg.no_solution}};
        if (include_times) {
            a["median_wall_time_s"] = agg.median_wall_time_s;
            a["mean_wall_time_s"] = agg.mean_wall_time_s;
        }
        aggregates_j[name] = std::move(a);
    }
    json certs_j = json::array();
    for (const auto& c : certificates) certs_j.push_back(io::to_json(c));
    return json{{"config", config.to_json()},
                {"gpe", io::to_json(gpe)},
                {"gpe_redraws", gpe_redraws},
                {"segmenting", "non-overlapping consecutive length-L segments"},
                {"certificates", certs_j},
                {"trials", trials_j},
                {"aggregates", aggregates_j},
                {"mean_attacked_rmse", mean_attacked_rmse},
                {"toolkit_version", toolkit_version}};
}

bool report_self_consistent(const Report& report, double tol) {
    for (const auto& [name, agg] : report.aggregates) {
        double rmse_sum = 0.0;
        int rmse_count = 0, recovered = 0, hits = 0;
        for (const auto& t : report.trials) {
            const auto& res = t.results.at(name);
            if (res.status == RecoveryStatus::recovered) {
                ++recovered;
                rmse_sum += t.rmse.at(name);
                ++rmse_count;
            }
            hits += t.support_identified.at(name) ? 1 : 0;
        }
        const double mean = rmse_count ? rmse_sum / rmse_count : 0.0;
        if (std::abs(mean - agg.mean_rmse) > tol * (1.0 + std::abs(mean))) return false;
        if (recovered != agg.recovered) return false;
        const double rate = static_cast<double>(hits) / report.trials.size();
        if (std::abs(rate - agg.support_rate) > tol) return false;
    }
    return true;
}

void write_plot_csv(std::ostream& os, const Report& report, int trial_index) {
    const auto& t = report.trials.at(trial_index);
    os << "time,variable,series,value\n";
    os.precision(17);
    auto emit = [&](const Trajectory& w, const std::string& series) {
        for (int step = 0; step < w.length(); ++step)
            for (int v = 0; v < w.q; ++v)
                os << step + 1 << ",w_" << v + 1 << "," << series << "," << w.samples(v, step)
                   << "\n";
    };
    emit(t.w_true, "true");
    emit(t.w_received, "attacked");
    for (const auto& [name, res] : t.results)
        if (res.status == RecoveryStatus::recovered) emit(res.w_tilde, "recovered_" + name);
}

}  // namespace bguard
