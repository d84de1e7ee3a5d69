#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "bguard/experiment.hpp"
#include "bguard/io.hpp"
#include "test_util.hpp"

using namespace bguard;
namespace tu = bguard::testutil;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.system = mass_spring_chain(3);
    cfg.system_name = "mass_spring_chain:3";
    cfg.ts = 1.3;
    cfg.T = 11;
    cfg.L = 3;
    cfg.k = 1;
    cfg.attack_kind = AttackKind::entry;
    cfg.attack_magnitude = 8.0;
    cfg.methods = {"bruteforce", "l1"};
    cfg.trials = 4;
    cfg.seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("trajectory CSV round-trips with headers") {
    const Trajectory w = tu::true_window(tu::chain3_discrete(), 5, 3);
    std::stringstream ss;
    io::write_trajectory_csv(ss, w, 1);
    CHECK(ss.str().rfind("u_1,y_1,y_2,y_3", 0) == 0);
    const Trajectory back = io::read_trajectory_csv(ss);
    REQUIRE(back.q == w.q);
    REQUIRE(back.length() == w.length());
    CHECK((back.samples - w.samples).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("system JSON round-trips") {
    const SystemSpec sys = mass_spring_chain(3);
    const SystemSpec back = io::system_from_json(io::to_json(sys));
    CHECK((back.A - sys.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.B - sys.B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.C - sys.C).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.time_kind == sys.time_kind);
}

TEST_CASE("attack record JSON round-trips") {
    const Trajectory w_bar = tu::true_window(tu::chain3_discrete(), 3, 4);
    const AttackRecord rec = entry_attack_random(w_bar, 2, 8.0, 17);
    const AttackRecord back = io::attack_from_json(io::to_json(rec));
    CHECK(back.support == rec.support);
    CHECK(back.kind == rec.kind);
    CHECK(back.k == rec.k);
    CHECK(back.seed == rec.seed);
    CHECK((back.w.samples - rec.w.samples).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("experiment config JSON round-trips") {
    const ExperimentConfig cfg = small_config();
    const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("substreams for different purposes never collide") {
    auto a = substream(7, Stream::data, 0);
    auto b = substream(7, Stream::attack, 0);
    auto c = substream(7, Stream::data, 1);
    CHECK(a() != b());
    CHECK(substream(7, Stream::data, 0)() != c());
    // Same coordinates reproduce the same stream.
    auto a2 = substream(7, Stream::data, 0);
    CHECK(substream(7, Stream::data, 0)() == a2());
}

TEST_CASE("experiments are deterministic per seed") {
    const ExperimentConfig cfg = small_config();
    const Report r1 = run_experiment(cfg);
    const Report r2 = run_experiment(cfg);
    CHECK(r1.to_json(false) == r2.to_json(false));
    ExperimentConfig other = cfg;
    other.seed = 100;
    CHECK(run_experiment(other).to_json(false) != r1.to_json(false));
}

TEST_CASE("the pipeline building blocks compose to the single-shot run") {
    const ExperimentConfig cfg = small_config();
    const Report report = run_experiment(cfg);

    GpeReport gpe;
    int redraws = 0;
    const Trajectory w_d = offline_data(cfg, &gpe, &redraws);
    CHECK(gpe.holds);
    CHECK(redraws == report.gpe_redraws);
    const HankelMatrix H = build_hankel(w_d, cfg.L);
    const Trajectory truth = online_truth(cfg);
    REQUIRE(truth.length() == cfg.trials * cfg.L);

    for (int t = 0; t < cfg.trials; ++t) {
        const Trajectory w_true(truth.q, truth.samples.middleCols(t * cfg.L, cfg.L));
        CHECK((w_true.samples - report.trials[t].w_true.samples).cwiseAbs().maxCoeff() == 0.0);
        const AttackRecord atk = trial_attack(w_true, cfg, t);
        CHECK(atk.support == report.trials[t].attack.support);
        const Trajectory received = trial_noise(atk.w, cfg, t);
        CHECK((received.samples - report.trials[t].w_received.samples).cwiseAbs().maxCoeff() ==
              0.0);
        for (const auto& m : cfg.methods) {
            const RecoveryResult res = run_recovery_method(m, H, received, cfg);
            const RecoveryResult& ref = report.trials[t].results.at(m);
            CHECK(res.status == ref.status);
            if (res.status == RecoveryStatus::recovered)
                CHECK((res.w_tilde.samples - ref.w_tilde.samples).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("reports are self-consistent and tampering is detected") {
    Report report = run_experiment(small_config());
    CHECK(report_self_consistent(report));
    report.aggregates.at("l1").mean_rmse += 0.5;
    CHECK_FALSE(report_self_consistent(report));
}

TEST_CASE("aggregates match hand-computed values from the trials") {
    const Report report = run_experiment(small_config());
    for (const auto& [name, agg] : report.aggregates) {
        double rmse_sum = 0.0;
        int recovered = 0;
        for (const auto& t : report.trials) {
            if (t.results.at(name).status == RecoveryStatus::recovered) {
                ++recovered;
                rmse_sum += t.rmse.at(name);
            }
        }
        CHECK(agg.recovered == recovered);
        if (recovered > 0)
            CHECK(agg.mean_rmse == doctest::Approx(rmse_sum / recovered).epsilon(1e-12));
    }
}

TEST_CASE("plot output is tidy long-format CSV") {
    const Report report = run_experiment(small_config());
    std::stringstream ss;
    write_plot_csv(ss, report, 0);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "time,variable,series,value");
    int lines = 0;
    for (std::string line; std::getline(ss, line);)
        if (!line.empty()) ++lines;
    // time steps x variables x (true, received, one per method).
    CHECK(lines == 3 * 4 * (2 + 2));
}

TEST_CASE("unknown methods and malformed configs are rejected") {
    const ExperimentConfig cfg = small_config();
    const HankelMatrix H = build_hankel(offline_data(cfg), cfg.L);
    CHECK_THROWS_AS(run_recovery_method("does_not_exist", H, tu::true_window(resolved_system(cfg), cfg.L, 1), cfg),
                    ContractViolation);
    nlohmann::json j = small_config().to_json();
    j["trials"] = 0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ContractViolation);
    j["trials"] = 1;
    j["attack"]["kind"] = "rows";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ContractViolation);
}
