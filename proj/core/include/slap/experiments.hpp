#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slap/adversary.hpp"
#include "slap/conversion.hpp"
#include "slap/messages.hpp"

namespace slap {

/// Parameters shared by every experiment. Trial t always draws from
/// Rng::substream(seed ^ salt, t), so results do not depend on `workers`.
struct ExperimentConfig {
    std::size_t length = 32;
    Threshold threshold{6};
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    [[nodiscard]] ProtocolParams params(bool fix = false) const {
        return {length, threshold, fix};
    }
};

/// Counts keyed by a non-negative integer (usually a Hamming distance).
struct Histogram {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t trial_count = 0;

    void add(std::size_t key, std::uint64_t n = 1) {
        counts[key] += n;
        trial_count += n;
    }
    void merge(const Histogram& other);
    [[nodiscard]] double frequency(std::size_t key) const;
    /// True when every key with a non-zero count has parity `parity`.
    [[nodiscard]] bool all_keys_have_parity(std::size_t parity) const;

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

// ---------------------------------------------------------------------------
// Conversion diffusion

/// Chained flips: B fixed, each step flips `bits_flipped` random positions of
/// the current A (never returning to the string of two steps back) and
/// records the distance between consecutive Conversion outputs. `trials`
/// steps are split evenly over `chains` independent chains.
[[nodiscard]] Histogram exp_conversion_chain_flip(std::size_t bits_flipped,
                                                  const ExperimentConfig& cfg,
                                                  std::size_t chains = 1);

/// Per trial: random A and B, flip two positions inside the leftmost or
/// rightmost six bits of A, record the output distance. With
/// `require_distinct_values` only pairs whose bits differ are drawn.
[[nodiscard]] Histogram exp_extreme_2flip_table(const ExperimentConfig& cfg,
                                                bool require_distinct_values = false);

struct CollisionSearchResult {
    std::uint64_t combinations = 0;
    std::uint64_t collisions = 0;
    [[nodiscard]] double rate() const {
        return combinations == 0 ? 0.0 : static_cast<double>(collisions) / combinations;
    }
    friend bool operator==(const CollisionSearchResult&, const CollisionSearchResult&) = default;
};

enum class CollisionSearchMode { one_vs_one, two_vs_two };

/// Every k-bit flip of A against every k-bit flip of B (k = 1 or 2), counting
/// Conv(A', B') == Conv(A, B). `trials` base pairs.
[[nodiscard]] CollisionSearchResult exp_random_collision_search(CollisionSearchMode mode,
                                                                const ExperimentConfig& cfg);

/// Summary of colliding input couples built with preimage() (mask weights 1
/// and 3 for the same target). Report-only.
struct SimilarityResult {
    std::uint64_t collisions = 0;
    double mean_weight_x1 = 0, mean_weight_mask1 = 0, mean_weight_x2 = 0, mean_weight_mask2 = 0;
    double mean_cross_distance = 0;  // mean Hamming distance across couples
};

[[nodiscard]] SimilarityResult exp_collision_similarity(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Nonce flips against B

struct NflipFullResult {
    Histogram differences;
    std::uint64_t collisions = 0;         // B' == B
    std::uint64_t parity_violations = 0;  // odd weight change
};

/// For each of `cfg.trials` suits (k1, k2, n), flips every pair of n.
[[nodiscard]] NflipFullResult exp_nflip_fullB(const ExperimentConfig& cfg);

struct NflipHalfResult {
    std::uint64_t flips = 0, collisions = 0;
    std::uint64_t extreme_flips = 0, extreme_collisions = 0;  // both bits in one end window
    std::uint64_t central_flips = 0, central_collisions = 0;  // every other pair
    Histogram differences;

    [[nodiscard]] double rate() const { return ratio(collisions, flips); }
    [[nodiscard]] double extreme_rate() const { return ratio(extreme_collisions, extreme_flips); }
    [[nodiscard]] double central_rate() const { return ratio(central_collisions, central_flips); }

private:
    static double ratio(std::uint64_t a, std::uint64_t b) {
        return b == 0 ? 0.0 : static_cast<double>(a) / b;
    }
};

/// Same sweep, comparing only the transmitted half.
[[nodiscard]] NflipHalfResult exp_nflip_halfB(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Extreme-window sweeps

struct StrategyTally {
    std::string name;
    std::uint64_t successes = 0;
    std::uint64_t attempts_total = 0;  // summed over successful trials

    [[nodiscard]] double mean_attempts() const {
        return successes == 0 ? 0.0 : static_cast<double>(attempts_total) / successes;
    }
};

/// Per trial: random (k1, k2, n), then each candidate flip applied to n (and
/// to A, which the fix feeds into F) and the resulting B half compared with
/// the original.
struct FlipSweepResult {
    std::uint64_t trials = 0;
    std::vector<FlipPair> flips;
    std::vector<std::uint64_t> hits;  // per flip
    std::uint64_t any_hits = 0;       // trials with at least one hit
    std::vector<StrategyTally> strategies;

    [[nodiscard]] double any_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(any_hits) / trials;
    }
    [[nodiscard]] double hit_rate(std::size_t flip) const {
        return trials == 0 ? 0.0 : static_cast<double>(hits.at(flip)) / trials;
    }
};

[[nodiscard]] FlipSweepResult sweep_flips(const ExperimentConfig& cfg,
                                          const std::vector<FlipPair>& flips, bool fix,
                                          const std::vector<Strategy>& strategies = {});

/// Fraction of suits with a half collision among all 30 extreme flips.
[[nodiscard]] double exp_collision_extreme_table(const ExperimentConfig& cfg);

struct FlipRate {
    FlipPair flip;
    double rate = 0;
};

/// Per-pair success rate of the 15 leftmost-window flips.
[[nodiscard]] std::vector<FlipRate> exp_flip_ranking(const ExperimentConfig& cfg);

struct LeftWindowResult {
    double all15 = 0;
    double reduced10 = 0;  // without (0,5) (2,4) (1,5) (3,5) (2,5)
};

[[nodiscard]] LeftWindowResult exp_left_window_success(const ExperimentConfig& cfg);

struct StrategyAttemptsResult {
    double success_rate = 0;
    double mean_attempts = 0;
};

[[nodiscard]] StrategyAttemptsResult exp_strategy_attempts(const Strategy& strategy,
                                                           const ExperimentConfig& cfg);

enum class FixMode { all30, left15, right15 };

[[nodiscard]] std::optional<FixMode> parse_fix_mode(std::string_view s);

/// Success rate of the flip attack when B carries the F term.
[[nodiscard]] double exp_fix_eval(const ExperimentConfig& cfg, FixMode mode);

// ---------------------------------------------------------------------------
// Protocol-level simulations

struct AttackSimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t attempts_total = 0;
    std::uint64_t invariant_violations = 0;  // successes breaking the impersonation invariant
    std::uint64_t untouched_failures = 0;    // failures leaving the tag unchanged

    [[nodiscard]] double success_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
    }
    [[nodiscard]] double mean_attempts() const {
        return successes == 0 ? 0.0 : static_cast<double>(attempts_total) / successes;
    }
};

/// Full Reader/Tag simulation: an honest session is eavesdropped, then the
/// adversary runs `strategy` against the Tag. Trial t's session keys and
/// nonce are the same values sweep_flips() draws for trial t.
[[nodiscard]] AttackSimulationResult exp_attack_simulation(const ExperimentConfig& cfg,
                                                           const Strategy& strategy,
                                                           bool fix = false);

struct ReplayResult {
    std::uint64_t scenarios = 0;
    std::uint64_t accepted = 0;    // replays the tag accepted
    std::uint64_t violations = 0;  // scenarios left without a shared triplet
};

/// Honest session, then its A and B half replayed to the Tag against the
/// triplet they were built for.
[[nodiscard]] ReplayResult exp_replay_property(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Reports

/// Machine-readable result table.
struct ExperimentReport {
    std::string id;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    double wall_seconds = 0;

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string to_markdown() const;
};

/// Options understood by run_experiment; unused fields are ignored.
struct ExperimentOptions {
    ExperimentConfig config;
    bool grid = false;  // run every (length, threshold) cell of the paper tables
    std::size_t flips = 1;
    std::size_t chains = 1;
    std::string mode;      // 1v1 | 2v2 for collision-search; all30 | left15 | right15 for fix-eval
    std::string strategy;  // for strategy-attempts / attack-simulation
    bool fix = false;
};

/// Identifiers accepted by run_experiment.
[[nodiscard]] const std::vector<std::string>& experiment_ids();

/// Runs experiment `id`. Throws std::invalid_argument for unknown ids or
/// options.
[[nodiscard]] ExperimentReport run_experiment(std::string_view id, const ExperimentOptions& opts);

/// The (length, threshold) cells used by the table experiments.
[[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& table_grid();

}  // namespace slap
