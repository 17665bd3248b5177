#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "degroot/experiments.hpp"

using namespace degroot;

TEST_CASE("unknown names are rejected, known names enumerate") {
    CHECK(experiment_names().size() == 9);
    ExperimentConfig cfg;
    cfg.name = "perpetual-motion";
    CHECK_THROWS(run_experiment(cfg));
}

TEST_CASE("identical configs reproduce identical reports") {
    ExperimentConfig cfg;
    cfg.name = "duality-suite";
    cfg.replicas = 40;
    cfg.seed = 9;
    auto a = run_experiment(cfg).summary;
    auto b = run_experiment(cfg).summary;
    a.erase("wall_clock_s");
    b.erase("wall_clock_s");
    CHECK(a.dump() == b.dump());
    CHECK(a["pass"].get<bool>());
}

TEST_CASE("config json round trip") {
    ExperimentConfig cfg;
    cfg.name = "spectral-lower-bound";
    cfg.n = 16;
    cfg.replicas = 50;
    cfg.seed = 12;
    cfg.strict = true;
    const auto back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.name == cfg.name);
    CHECK(back.n == cfg.n);
    CHECK(back.replicas == cfg.replicas);
    CHECK(back.seed == cfg.seed);
    CHECK(back.strict == cfg.strict);
}

TEST_CASE("verdict experiments run at reduced size") {
    ExperimentConfig cfg;
    cfg.name = "spectral-lower-bound";
    cfg.n = 16;
    cfg.replicas = 60;
    cfg.seed = 5;
    const auto rep = run_experiment(cfg);
    CHECK(rep.has_verdict);
    CHECK(rep.pass);
    CHECK(rep.summary["bounds"].size() >= 4);
}

TEST_CASE("block-line basis override propagates") {
    ExperimentConfig cfg;
    cfg.name = "block-line-oscillation";
    cfg.n = 8;
    const auto rep = run_experiment(cfg);
    CHECK(rep.summary["basis"].get<long>() == 8);
    CHECK(rep.summary["probes"].size() == 4);
}

TEST_CASE("output files: summary plus a csv table") {
    const auto dir = std::filesystem::temp_directory_path() / "degroot_exp_out";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg;
    cfg.name = "drift-blowup";
    cfg.replicas = 30;
    cfg.t_max = 2000;
    cfg.n = 9;
    cfg.out_dir = dir.string();
    run_experiment(cfg);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "points.csv"));
    std::filesystem::remove_all(dir);
}
