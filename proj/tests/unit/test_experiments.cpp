#include "doctest.h"

#include "json.hpp"
#include "slap/experiments.hpp"

using namespace slap;

namespace {
ExperimentConfig small(std::uint64_t trials, unsigned workers = 1) {
    ExperimentConfig c;
    c.trials = trials;
    c.seed = 17;
    c.workers = workers;
    return c;
}
}  // namespace

TEST_CASE("histogram") {
    Histogram h;
    h.add(1);
    h.add(3, 3);
    CHECK(h.trial_count == 4);
    CHECK(h.frequency(3) == doctest::Approx(0.75));
    CHECK(h.frequency(9) == 0.0);
    CHECK(h.all_keys_have_parity(1));
    Histogram g;
    g.add(2);
    h.merge(g);
    CHECK_FALSE(h.all_keys_have_parity(1));
    CHECK(h.trial_count == 5);
}

TEST_CASE("chain flips respect the parity law") {
    for (std::size_t k = 1; k <= 4; ++k) {
        const Histogram h = exp_conversion_chain_flip(k, small(4000), 4);
        CHECK(h.trial_count == 4000);
        CHECK(h.all_keys_have_parity(k % 2));
        double total = 0;
        for (const auto& [key, n] : h.counts) total += h.frequency(key);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS((void)exp_conversion_chain_flip(0, small(10)), std::invalid_argument);
}

TEST_CASE("extreme two-bit flips give even differences") {
    CHECK(exp_extreme_2flip_table(small(3000)).all_keys_have_parity(0));
    CHECK(exp_extreme_2flip_table(small(3000), true).all_keys_have_parity(0));
}

TEST_CASE("worker count does not change results") {
    CHECK(exp_conversion_chain_flip(1, small(3000, 1), 6) ==
          exp_conversion_chain_flip(1, small(3000, 3), 6));
    CHECK(exp_extreme_2flip_table(small(2000, 1)) == exp_extreme_2flip_table(small(2000, 4)));
    const auto a = sweep_flips(small(500, 1), candidate_flips(FlipSides::both), false,
                               strategy_catalog());
    const auto b = sweep_flips(small(500, 5), candidate_flips(FlipSides::both), false,
                               strategy_catalog());
    CHECK(a.hits == b.hits);
    CHECK(a.any_hits == b.any_hits);
    CHECK(a.strategies[2].attempts_total == b.strategies[2].attempts_total);
    CHECK(exp_random_collision_search(CollisionSearchMode::one_vs_one, small(5, 1)) ==
          exp_random_collision_search(CollisionSearchMode::one_vs_one, small(5, 2)));
}

TEST_CASE("nonce flip sweeps") {
    const NflipFullResult full = exp_nflip_fullB(small(3));
    CHECK(full.differences.trial_count == 3 * 496);
    CHECK(full.parity_violations == 0);
    CHECK(full.differences.all_keys_have_parity(0));
    const NflipHalfResult half = exp_nflip_halfB(small(3));
    CHECK(half.flips == 3 * 496);
    CHECK(half.extreme_flips == 3 * 30);
    CHECK(half.extreme_flips + half.central_flips == half.flips);
}

TEST_CASE("full simulation reproduces the statistical sweep trial by trial") {
    const ExperimentConfig cfg = small(300);
    const Strategy all = *find_strategy("all30");
    const FlipSweepResult sweep = sweep_flips(cfg, {}, false, {all});
    const AttackSimulationResult sim = exp_attack_simulation(cfg, all);
    CHECK(sim.successes == sweep.strategies[0].successes);
    CHECK(sim.attempts_total == sweep.strategies[0].attempts_total);
    CHECK(sim.invariant_violations == 0);
    CHECK(sim.untouched_failures == sim.trials - sim.successes);

    const FlipSweepResult fixed = sweep_flips(cfg, {}, true, {all});
    const AttackSimulationResult sim_fixed = exp_attack_simulation(cfg, all, true);
    CHECK(sim_fixed.successes == fixed.strategies[0].successes);
}

TEST_CASE("replay keeps devices synchronized") {
    const ReplayResult r = exp_replay_property(small(50));
    CHECK(r.scenarios == 50);
    CHECK(r.accepted == 50);
    CHECK(r.violations == 0);
}

TEST_CASE("similarity experiment") {
    const SimilarityResult r = exp_collision_similarity(small(200));
    CHECK(r.collisions == 200);
    CHECK(r.mean_weight_mask1 == doctest::Approx(1.0));
    CHECK(r.mean_weight_mask2 == doctest::Approx(3.0));
}

TEST_CASE("strategy attempts stay within the strategy length") {
    for (const auto& s : strategy_catalog()) {
        const StrategyAttemptsResult r = exp_strategy_attempts(s, small(500));
        CHECK(r.mean_attempts >= 1.0);
        CHECK(r.mean_attempts <= 10.0);
        CHECK(r.success_rate > 0.2);
    }
}

TEST_CASE("reports") {
    ExperimentOptions o;
    o.config = small(200);
    const ExperimentReport csv = run_experiment("collisions-extreme", o);
    CHECK(csv.columns == std::vector<std::string>{"string length", "threshold", "collision found"});
    CHECK(csv.rows.size() == 1);
    const std::string text = csv.to_csv();
    CHECK(text.find("# seed=17") != std::string::npos);
    CHECK(text.find("string length,threshold,collision found\n32,6,") != std::string::npos);

    const auto j = nlohmann::json::parse(csv.to_json());
    CHECK(j["experiment"] == "collisions-extreme");
    CHECK(j["parameters"]["trials"] == "200");
    CHECK(j["rows"].size() == 1);
    CHECK(csv.to_markdown().find("| string length | threshold | collision found |") !=
          std::string::npos);

    o.grid = true;
    o.config.trials = 20;
    CHECK(run_experiment("fix-eval", o).rows.size() == 8);
    CHECK_THROWS_AS((void)run_experiment("no-such-thing", o), std::invalid_argument);
    o.mode = "left99";
    CHECK_THROWS_AS((void)run_experiment("fix-eval", o), std::invalid_argument);
}

TEST_CASE("same parameters reproduce the same report table") {
    ExperimentOptions o;
    o.config = small(300);
    for (const std::string id : {"diffusion", "extreme-2flip", "flip-ranking", "left-window"}) {
        CHECK(run_experiment(id, o).rows == run_experiment(id, o).rows);
    }
}
