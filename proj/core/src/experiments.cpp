#include "slap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "slap/channel.hpp"
#include "slap/rng.hpp"

namespace slap {

namespace {

constexpr std::uint64_t kChainSalt = 0x636861696eULL;
constexpr std::uint64_t kExtremeSalt = 0x6578747265ULL;
constexpr std::uint64_t kSearchSalt = 0x7365617263ULL;
constexpr std::uint64_t kSimilaritySalt = 0x73696d696cULL;
constexpr std::uint64_t kNflipSalt = 0x6e666c6970ULL;
constexpr std::uint64_t kSweepSalt = 0x7377656570ULL;
constexpr std::uint64_t kSimulationSalt = 0x73696d756cULL;
constexpr std::uint64_t kReplaySalt = 0x7265706c61ULL;

constexpr std::size_t kWindow = 6;

// Runs fn(t, acc) for t in [0, trials). Each worker owns a contiguous block
// and its own accumulator; blocks are merged in order.
template <class Acc, class Fn, class Merge>
Acc run_trials(std::uint64_t trials, unsigned workers, const Acc& init, Fn fn, Merge merge) {
    const std::uint64_t w = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, trials));
    if (w == 1) {
        Acc acc = init;
        for (std::uint64_t t = 0; t < trials; ++t) fn(t, acc);
        return acc;
    }
    std::vector<Acc> parts(w, init);
    std::vector<std::exception_ptr> errors(w);
    const std::uint64_t chunk = (trials + w - 1) / w;
    {
        std::vector<std::jthread> threads;
        for (std::uint64_t k = 0; k < w; ++k) {
            threads.emplace_back([&, k] {
                try {
                    const std::uint64_t end = std::min(trials, (k + 1) * chunk);
                    for (std::uint64_t t = k * chunk; t < end; ++t) fn(t, parts[k]);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    Acc acc = parts[0];
    for (std::uint64_t k = 1; k < w; ++k) merge(acc, parts[k]);
    return acc;
}

std::vector<std::size_t> distinct_positions(std::size_t count, std::size_t length, Rng& rng) {
    std::vector<std::size_t> out;
    while (out.size() < count) {
        const auto p = static_cast<std::size_t>(rng.below(length));
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

void check_config(const ExperimentConfig& cfg) {
    cfg.params().validate();
    if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
}

}  // namespace

void Histogram::merge(const Histogram& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
    trial_count += other.trial_count;
}

double Histogram::frequency(std::size_t key) const {
    if (trial_count == 0) return 0.0;
    const auto it = counts.find(key);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / trial_count;
}

bool Histogram::all_keys_have_parity(std::size_t parity) const {
    return std::all_of(counts.begin(), counts.end(),
                       [&](const auto& kv) { return kv.second == 0 || kv.first % 2 == parity; });
}

// ---------------------------------------------------------------------------

Histogram exp_conversion_chain_flip(std::size_t bits_flipped, const ExperimentConfig& cfg,
                                    std::size_t chains) {
    check_config(cfg);
    if (bits_flipped < 1 || bits_flipped > cfg.length) {
        throw std::invalid_argument("bits_flipped must be in [1, length]");
    }
    if (chains < 1 || chains > cfg.trials) throw std::invalid_argument("chains must be in [1, trials]");

    auto one_chain = [&](std::uint64_t c, Histogram& h) {
        Rng rng = Rng::substream(cfg.seed ^ kChainSalt, c);
        BitString a = random_bitstring(cfg.length, rng);
        const BitString b = random_bitstring(cfg.length, rng);
        const std::uint64_t steps = cfg.trials / chains + (c < cfg.trials % chains ? 1 : 0);
        std::optional<BitString> two_back;
        BitString out = conversion(a, b, cfg.threshold);
        for (std::uint64_t s = 0; s < steps; ++s) {
            BitString next;
            do {
                next = flip_bits(a, distinct_positions(bits_flipped, cfg.length, rng));
            } while (two_back && next == *two_back);
            BitString next_out = conversion(next, b, cfg.threshold);
            h.add(hamming_distance(out, next_out));
            two_back = std::move(a);
            a = std::move(next);
            out = std::move(next_out);
        }
    };
    return run_trials<Histogram>(chains, cfg.workers, {}, one_chain,
                                 [](Histogram& a, const Histogram& b) { a.merge(b); });
}

Histogram exp_extreme_2flip_table(const ExperimentConfig& cfg, bool require_distinct_values) {
    check_config(cfg);
    auto trial = [&](std::uint64_t t, Histogram& h) {
        Rng rng = Rng::substream(cfg.seed ^ kExtremeSalt, t);
        for (;;) {
            const BitString a = random_bitstring(cfg.length, rng);
            const BitString b = random_bitstring(cfg.length, rng);
            std::size_t p = 0, q = 0;
            if (!require_distinct_values) {
                const std::size_t base = rng.below(2) == 0 ? 0 : cfg.length - kWindow;
                const auto i = static_cast<std::size_t>(rng.below(kWindow));
                auto j = static_cast<std::size_t>(rng.below(kWindow - 1));
                if (j >= i) ++j;
                p = base + i;
                q = base + j;
            } else {
                std::vector<std::pair<std::size_t, std::size_t>> valid;
                for (std::size_t base : {std::size_t{0}, cfg.length - kWindow}) {
                    for (std::size_t i = 0; i < kWindow; ++i) {
                        for (std::size_t j = i + 1; j < kWindow; ++j) {
                            if (a.bit(base + i) != a.bit(base + j)) valid.emplace_back(base + i, base + j);
                        }
                    }
                }
                if (valid.empty()) continue;
                std::tie(p, q) = valid[rng.below(valid.size())];
            }
            const BitString out = conversion(a, b, cfg.threshold);
            h.add(hamming_distance(out, conversion(flip_bits(a, {p, q}), b, cfg.threshold)));
            return;
        }
    };
    return run_trials<Histogram>(cfg.trials, cfg.workers, {}, trial,
                                 [](Histogram& a, const Histogram& b) { a.merge(b); });
}

CollisionSearchResult exp_random_collision_search(CollisionSearchMode mode,
                                                  const ExperimentConfig& cfg) {
    check_config(cfg);
    const std::size_t L = cfg.length;
    auto variants = [&](const BitString& s) {
        std::vector<BitString> v;
        for (std::size_t i = 0; i < L; ++i) {
            if (mode == CollisionSearchMode::one_vs_one) {
                v.push_back(flip_bits(s, {i}));
            } else {
                for (std::size_t j = i + 1; j < L; ++j) v.push_back(flip_bits(s, {i, j}));
            }
        }
        return v;
    };
    auto trial = [&](std::uint64_t t, CollisionSearchResult& r) {
        Rng rng = Rng::substream(cfg.seed ^ kSearchSalt, t);
        const BitString a = random_bitstring(L, rng);
        const BitString b = random_bitstring(L, rng);
        const BitString target = conversion(a, b, cfg.threshold);
        const auto as = variants(a);
        const auto bs = variants(b);
        for (const auto& x : as) {
            for (const auto& y : bs) {
                ++r.combinations;
                if (conversion(x, y, cfg.threshold) == target) ++r.collisions;
            }
        }
    };
    return run_trials<CollisionSearchResult>(
        cfg.trials, cfg.workers, {}, trial, [](CollisionSearchResult& a, const CollisionSearchResult& b) {
            a.combinations += b.combinations;
            a.collisions += b.collisions;
        });
}

SimilarityResult exp_collision_similarity(const ExperimentConfig& cfg) {
    check_config(cfg);
    struct Acc {
        std::uint64_t n = 0, wx1 = 0, wm1 = 0, wx2 = 0, wm2 = 0, cross = 0;
    };
    auto trial = [&](std::uint64_t t, Acc& acc) {
        Rng rng = Rng::substream(cfg.seed ^ kSimilaritySalt, t);
        const BitString target = random_bitstring(cfg.length, rng);
        const Preimage p1 = preimage(target, cfg.threshold, 1);
        const Preimage p3 = preimage(target, cfg.threshold, 3);
        ++acc.n;
        acc.wx1 += weight(p1.x);
        acc.wm1 += weight(p1.mask);
        acc.wx2 += weight(p3.x);
        acc.wm2 += weight(p3.mask);
        acc.cross += hamming_distance(p1.x, p3.x) + hamming_distance(p1.x, p3.mask) +
                     hamming_distance(p1.mask, p3.x) + hamming_distance(p1.mask, p3.mask);
    };
    const Acc acc = run_trials<Acc>(cfg.trials, cfg.workers, {}, trial, [](Acc& a, const Acc& b) {
        a.n += b.n;
        a.wx1 += b.wx1;
        a.wm1 += b.wm1;
        a.wx2 += b.wx2;
        a.wm2 += b.wm2;
        a.cross += b.cross;
    });
    const auto n = static_cast<double>(acc.n);
    return {acc.n,          acc.wx1 / n, acc.wm1 / n, acc.wx2 / n, acc.wm2 / n,
            acc.cross / (4 * n)};
}

// ---------------------------------------------------------------------------

namespace {

struct Suit {
    BitString k1, k2, n;
};

Suit draw_suit(const ExperimentConfig& cfg, std::uint64_t salt, std::uint64_t t) {
    Rng rng = Rng::substream(cfg.seed ^ salt, t);
    Suit s;
    s.k1 = random_bitstring(cfg.length, rng);
    s.k2 = random_bitstring(cfg.length, rng);
    s.n = random_bitstring(cfg.length, rng);
    return s;
}

}  // namespace

NflipFullResult exp_nflip_fullB(const ExperimentConfig& cfg) {
    check_config(cfg);
    const ProtocolParams p = cfg.params();
    auto trial = [&](std::uint64_t t, NflipFullResult& r) {
        const Suit s = draw_suit(cfg, kNflipSalt, t);
        const BitString B = build_B(s.k1, s.k2, s.n, p);
        const std::size_t wb = weight(B);
        for (std::size_t i = 0; i < cfg.length; ++i) {
            for (std::size_t j = i + 1; j < cfg.length; ++j) {
                const BitString B2 = build_B(s.k1, s.k2, flip_bits(s.n, {i, j}), p);
                const std::size_t d = hamming_distance(B, B2);
                r.differences.add(d);
                if (d == 0) ++r.collisions;
                if ((wb + weight(B2)) % 2 != 0) ++r.parity_violations;
            }
        }
    };
    return run_trials<NflipFullResult>(cfg.trials, cfg.workers, {}, trial,
                                       [](NflipFullResult& a, const NflipFullResult& b) {
                                           a.differences.merge(b.differences);
                                           a.collisions += b.collisions;
                                           a.parity_violations += b.parity_violations;
                                       });
}

NflipHalfResult exp_nflip_halfB(const ExperimentConfig& cfg) {
    check_config(cfg);
    const ProtocolParams p = cfg.params();
    const std::size_t L = cfg.length;
    auto in_window = [&](std::size_t i, std::size_t j) {
        return j < kWindow || i >= L - kWindow;
    };
    auto trial = [&](std::uint64_t t, NflipHalfResult& r) {
        const Suit s = draw_suit(cfg, kNflipSalt, t);
        const HalfMessage h = select_half(build_B(s.k1, s.k2, s.n, p));
        for (std::size_t i = 0; i < L; ++i) {
            for (std::size_t j = i + 1; j < L; ++j) {
                const HalfMessage h2 = select_half(build_B(s.k1, s.k2, flip_bits(s.n, {i, j}), p));
                const bool hit = h2 == h;
                ++r.flips;
                r.collisions += hit;
                if (in_window(i, j)) {
                    ++r.extreme_flips;
                    r.extreme_collisions += hit;
                } else {
                    ++r.central_flips;
                    r.central_collisions += hit;
                }
                if (h2.side == h.side) r.differences.add(hamming_distance(h.bits, h2.bits));
            }
        }
    };
    return run_trials<NflipHalfResult>(cfg.trials, cfg.workers, {}, trial,
                                       [](NflipHalfResult& a, const NflipHalfResult& b) {
                                           a.flips += b.flips;
                                           a.collisions += b.collisions;
                                           a.extreme_flips += b.extreme_flips;
                                           a.extreme_collisions += b.extreme_collisions;
                                           a.central_flips += b.central_flips;
                                           a.central_collisions += b.central_collisions;
                                           a.differences.merge(b.differences);
                                       });
}

// ---------------------------------------------------------------------------

FlipSweepResult sweep_flips(const ExperimentConfig& cfg, const std::vector<FlipPair>& flips,
                            bool fix, const std::vector<Strategy>& strategies) {
    check_config(cfg);
    const ProtocolParams p = cfg.params(fix);

    FlipSweepResult init;
    init.flips = flips;
    init.hits.assign(flips.size(), 0);
    for (const auto& s : strategies) init.strategies.push_back({s.name, 0, 0});

    auto trial = [&](std::uint64_t t, FlipSweepResult& r) {
        const Suit s = draw_suit(cfg, kSweepSalt, t);
        const BitString A = build_A(s.k1, s.k2, s.n, p);
        const HalfMessage h = select_half(build_B_for(s.k1, s.k2, s.n, A, p));

        std::vector<std::pair<FlipPair, bool>> cache;
        auto hit = [&](const FlipPair& f) {
            for (const auto& [g, v] : cache) {
                if (g == f) return v;
            }
            const auto [i, j] = f.positions(cfg.length, kWindow);
            const BitString n2 = flip_bits(s.n, {i, j});
            const BitString A2 = flip_bits(A, {i, j});
            const bool v = select_half(build_B_for(s.k1, s.k2, n2, A2, p)) == h;
            cache.emplace_back(f, v);
            return v;
        };

        ++r.trials;
        bool any = false;
        for (std::size_t f = 0; f < flips.size(); ++f) {
            if (hit(flips[f])) {
                ++r.hits[f];
                any = true;
            }
        }
        r.any_hits += any;
        for (std::size_t k = 0; k < strategies.size(); ++k) {
            const auto& seq = strategies[k].flips;
            for (std::size_t a = 0; a < seq.size(); ++a) {
                if (hit(seq[a])) {
                    ++r.strategies[k].successes;
                    r.strategies[k].attempts_total += a + 1;
                    break;
                }
            }
        }
    };
    return run_trials<FlipSweepResult>(cfg.trials, cfg.workers, init, trial,
                                       [](FlipSweepResult& a, const FlipSweepResult& b) {
                                           a.trials += b.trials;
                                           a.any_hits += b.any_hits;
                                           for (std::size_t f = 0; f < a.hits.size(); ++f) {
                                               a.hits[f] += b.hits[f];
                                           }
                                           for (std::size_t k = 0; k < a.strategies.size(); ++k) {
                                               a.strategies[k].successes += b.strategies[k].successes;
                                               a.strategies[k].attempts_total +=
                                                   b.strategies[k].attempts_total;
                                           }
                                       });
}

double exp_collision_extreme_table(const ExperimentConfig& cfg) {
    return sweep_flips(cfg, candidate_flips(FlipSides::both), false).any_rate();
}

std::vector<FlipRate> exp_flip_ranking(const ExperimentConfig& cfg) {
    const auto flips = candidate_flips(FlipSides::leftmost);
    const FlipSweepResult r = sweep_flips(cfg, flips, false);
    std::vector<FlipRate> out;
    for (std::size_t f = 0; f < flips.size(); ++f) out.push_back({flips[f], r.hit_rate(f)});
    return out;
}

LeftWindowResult exp_left_window_success(const ExperimentConfig& cfg) {
    const auto flips = candidate_flips(FlipSides::leftmost);
    std::vector<FlipPair> reduced;
    const std::vector<std::pair<std::size_t, std::size_t>> dropped = {
        {0, 5}, {2, 4}, {1, 5}, {3, 5}, {2, 5}};
    for (const auto& f : flips) {
        if (std::find(dropped.begin(), dropped.end(), std::pair{f.i, f.j}) == dropped.end()) {
            reduced.push_back(f);
        }
    }
    const FlipSweepResult r =
        sweep_flips(cfg, flips, false, {Strategy{"left15", flips}, Strategy{"reduced10", reduced}});
    const auto rate = [&](std::size_t k) {
        return static_cast<double>(r.strategies[k].successes) / r.trials;
    };
    return {rate(0), rate(1)};
}

StrategyAttemptsResult exp_strategy_attempts(const Strategy& strategy, const ExperimentConfig& cfg) {
    const FlipSweepResult r = sweep_flips(cfg, {}, false, {strategy});
    const StrategyTally& s = r.strategies.front();
    return {static_cast<double>(s.successes) / r.trials, s.mean_attempts()};
}

std::optional<FixMode> parse_fix_mode(std::string_view s) {
    if (s == "all30") return FixMode::all30;
    if (s == "left15") return FixMode::left15;
    if (s == "right15") return FixMode::right15;
    return std::nullopt;
}

double exp_fix_eval(const ExperimentConfig& cfg, FixMode mode) {
    const FlipSides sides = mode == FixMode::all30    ? FlipSides::both
                            : mode == FixMode::left15 ? FlipSides::leftmost
                                                      : FlipSides::rightmost;
    return sweep_flips(cfg, candidate_flips(sides), true).any_rate();
}

// ---------------------------------------------------------------------------

namespace {

struct Deployment {
    ReaderAgent reader;
    TagAgent tag;
    Channel channel;
    std::size_t handle = 0;
};

// Reader and Tag synchronized on (old, new) where new carries the keys of
// sweep trial t and the Reader's first nonce is that trial's n.
Deployment deploy(const ExperimentConfig& cfg, const ProtocolParams& p, std::uint64_t t,
                  std::uint64_t salt) {
    Rng trial = Rng::substream(cfg.seed ^ kSweepSalt, t);
    Rng aux = Rng::substream(cfg.seed ^ salt, t);
    Triplet fresh;
    fresh.k1 = random_bitstring(cfg.length, trial);
    fresh.k2 = random_bitstring(cfg.length, trial);
    fresh.id = random_bitstring(cfg.length, aux);
    const Triplet old = random_triplet(p, aux);
    const DeviceState state{old, fresh};
    Deployment d{ReaderAgent(p, trial), TagAgent(state, p), Channel(Rng(aux.next())), 0};
    d.handle = d.reader.enroll(state);
    return d;
}

}  // namespace

AttackSimulationResult exp_attack_simulation(const ExperimentConfig& cfg, const Strategy& strategy,
                                             bool fix) {
    check_config(cfg);
    const ProtocolParams p = cfg.params(fix);
    auto trial = [&](std::uint64_t t, AttackSimulationResult& r) {
        Deployment d = deploy(cfg, p, t, kSimulationSalt);
        d.channel.begin_session();
        const SessionOutcome honest = run_reader_session(d.reader, d.tag, d.channel);
        if (honest.status != SessionStatus::completed) {
            throw std::logic_error("honest session did not complete");
        }
        const Eavesdropped ev = Eavesdropped::from_transcript(honest.transcript);
        const DeviceState before = d.tag.state();
        const AttackReport rep =
            impersonation_attack(d.tag, ev, strategy, d.channel, strategy.flips.size());
        ++r.trials;
        if (rep.success) {
            ++r.successes;
            r.attempts_total += rep.attempts;
            if (!impersonation_invariant(d.reader.device(d.handle), d.tag.state())) {
                ++r.invariant_violations;
            }
        } else if (d.tag.state() == before) {
            ++r.untouched_failures;
        }
    };
    return run_trials<AttackSimulationResult>(
        cfg.trials, cfg.workers, {}, trial,
        [](AttackSimulationResult& a, const AttackSimulationResult& b) {
            a.trials += b.trials;
            a.successes += b.successes;
            a.attempts_total += b.attempts_total;
            a.invariant_violations += b.invariant_violations;
            a.untouched_failures += b.untouched_failures;
        });
}

ReplayResult exp_replay_property(const ExperimentConfig& cfg) {
    check_config(cfg);
    const ProtocolParams p = cfg.params();
    auto trial = [&](std::uint64_t t, ReplayResult& r) {
        Deployment d = deploy(cfg, p, t, kReplaySalt);
        d.channel.begin_session();
        const SessionOutcome honest = run_reader_session(d.reader, d.tag, d.channel);
        if (honest.status != SessionStatus::completed) {
            throw std::logic_error("honest session did not complete");
        }
        const Eavesdropped ev = Eavesdropped::from_transcript(honest.transcript);
        ++r.scenarios;
        if (send_to_tag(d.tag, d.channel, 2, ev.A, ev.b_half)) ++r.accepted;
        if (!share_triplet(d.reader.device(d.handle), d.tag.state())) ++r.violations;
    };
    return run_trials<ReplayResult>(cfg.trials, cfg.workers, {}, trial,
                                    [](ReplayResult& a, const ReplayResult& b) {
                                        a.scenarios += b.scenarios;
                                        a.accepted += b.accepted;
                                        a.violations += b.violations;
                                    });
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", fraction * 100.0);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string flip_name(const FlipPair& f) {
    return "(" + std::to_string(f.i) + "," + std::to_string(f.j) + ")" +
           (f.side == WindowSide::rightmost ? "R" : "");
}

}  // namespace

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "# experiment=" << id << "\n";
    for (const auto& [k, v] : parameters) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_field(columns[c]);
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << "\n";
    }
    return out.str();
}

std::string ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = id;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) j["parameters"][k] = v;
    j["columns"] = columns;
    j["rows"] = rows;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_markdown() const {
    std::ostringstream out;
    out << "## " << id << "\n\n";
    for (const auto& [k, v] : parameters) out << "- " << k << ": " << v << "\n";
    out << "\n|";
    for (const auto& c : columns) out << " " << c << " |";
    out << "\n|";
    for (std::size_t c = 0; c < columns.size(); ++c) out << "---|";
    out << "\n";
    for (const auto& row : rows) {
        out << "|";
        for (const auto& v : row) out << " " << v << " |";
        out << "\n";
    }
    return out.str();
}

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {
        "diffusion",          "extreme-2flip",     "nflip-full",       "nflip-half",
        "collisions-extreme", "flip-ranking",      "left-window",      "strategy-attempts",
        "fix-eval",           "collision-search",  "collision-similarity", "attack-simulation",
        "replay"};
    return ids;
}

const std::vector<std::pair<std::size_t, std::size_t>>& table_grid() {
    static const std::vector<std::pair<std::size_t, std::size_t>> grid = {
        {32, 6}, {32, 7}, {32, 8}, {32, 10}, {96, 6}, {96, 7}, {96, 8}, {96, 10}};
    return grid;
}

ExperimentReport run_experiment(std::string_view id, const ExperimentOptions& opts) {
    const auto& ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string known;
        for (const auto& k : ids) known += (known.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown experiment '" + std::string(id) + "' (known: " + known +
                                    ")");
    }
    opts.config.params().validate();

    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.id = std::string(id);
    const ExperimentConfig& base = opts.config;
    rep.parameters = {{"length", std::to_string(base.length)},
                      {"threshold", std::to_string(base.threshold.value)},
                      {"trials", std::to_string(base.trials)},
                      {"seed", std::to_string(base.seed)},
                      {"workers", std::to_string(base.workers)},
                      {"grid", opts.grid ? "true" : "false"}};

    std::vector<ExperimentConfig> cells;
    if (opts.grid) {
        for (auto [l, t] : table_grid()) {
            ExperimentConfig c = base;
            c.length = l;
            c.threshold = Threshold{t};
            cells.push_back(c);
        }
    } else {
        cells.push_back(base);
    }
    auto lead = [](const ExperimentConfig& c) {
        return std::vector<std::string>{std::to_string(c.length), std::to_string(c.threshold.value)};
    };
    auto row = [&](const ExperimentConfig& c, std::initializer_list<std::string> rest) {
        auto r = lead(c);
        r.insert(r.end(), rest);
        rep.rows.push_back(std::move(r));
    };
    const std::vector<std::string> head = {"string length", "threshold"};
    auto columns = [&](std::initializer_list<std::string> rest) {
        rep.columns = head;
        rep.columns.insert(rep.columns.end(), rest);
    };

    auto resolve_strategies = [&]() {
        if (opts.strategy.empty()) return strategy_catalog();
        auto s = find_strategy(opts.strategy);
        if (!s) throw std::invalid_argument("unknown strategy '" + opts.strategy + "'");
        return std::vector<Strategy>{*s};
    };

    if (id == "diffusion") {
        rep.parameters.emplace_back("flips", std::to_string(opts.flips));
        rep.parameters.emplace_back("chains", std::to_string(opts.chains));
        columns({"#Different bits", "Frequency"});
        for (const auto& c : cells) {
            const Histogram h = exp_conversion_chain_flip(opts.flips, c, opts.chains);
            for (const auto& [k, v] : h.counts) row(c, {std::to_string(k), pct(h.frequency(k))});
        }
    } else if (id == "extreme-2flip") {
        columns({"#Different bits", "Frequency"});
        for (const auto& c : cells) {
            const Histogram h = exp_extreme_2flip_table(c);
            for (const auto& [k, v] : h.counts) row(c, {std::to_string(k), pct(h.frequency(k))});
        }
    } else if (id == "nflip-full") {
        columns({"suits", "flips", "collisions", "collision rate", "parity violations"});
        for (const auto& c : cells) {
            const NflipFullResult r = exp_nflip_fullB(c);
            row(c, {std::to_string(c.trials), std::to_string(r.differences.trial_count),
                    std::to_string(r.collisions), pct(r.differences.frequency(0)),
                    std::to_string(r.parity_violations)});
        }
    } else if (id == "nflip-half") {
        columns({"suits", "flips", "collision rate", "extreme-window rate", "central rate"});
        for (const auto& c : cells) {
            const NflipHalfResult r = exp_nflip_halfB(c);
            row(c, {std::to_string(c.trials), std::to_string(r.flips), pct(r.rate()),
                    pct(r.extreme_rate()), pct(r.central_rate())});
        }
    } else if (id == "collisions-extreme") {
        columns({"collision found"});
        for (const auto& c : cells) row(c, {pct(exp_collision_extreme_table(c))});
    } else if (id == "flip-ranking") {
        columns({"Flipped indexes", "success rate"});
        for (const auto& c : cells) {
            for (const auto& f : exp_flip_ranking(c)) row(c, {flip_name(f.flip), pct(f.rate)});
        }
    } else if (id == "left-window") {
        columns({"Success rate", "Success rate (10 pairs)"});
        for (const auto& c : cells) {
            const LeftWindowResult r = exp_left_window_success(c);
            row(c, {pct(r.all15), pct(r.reduced10)});
        }
    } else if (id == "strategy-attempts") {
        columns({"strategy", "success rate", "average attempts required"});
        const auto strategies = resolve_strategies();
        for (const auto& c : cells) {
            const FlipSweepResult r = sweep_flips(c, {}, false, strategies);
            for (const auto& s : r.strategies) {
                row(c, {s.name, pct(static_cast<double>(s.successes) / r.trials),
                        num(s.mean_attempts())});
            }
        }
    } else if (id == "fix-eval") {
        const std::string m = opts.mode.empty() ? "all30" : opts.mode;
        const auto mode = parse_fix_mode(m);
        if (!mode) throw std::invalid_argument("fix-eval mode must be all30, left15 or right15");
        rep.parameters.emplace_back("mode", m);
        columns({"Success"});
        for (const auto& c : cells) row(c, {pct(exp_fix_eval(c, *mode))});
    } else if (id == "collision-search") {
        const std::string m = opts.mode.empty() ? "1v1" : opts.mode;
        if (m != "1v1" && m != "2v2") throw std::invalid_argument("collision-search mode must be 1v1 or 2v2");
        rep.parameters.emplace_back("mode", m);
        columns({"combinations", "collisions", "probability"});
        const auto mode = m == "1v1" ? CollisionSearchMode::one_vs_one : CollisionSearchMode::two_vs_two;
        for (const auto& c : cells) {
            const CollisionSearchResult r = exp_random_collision_search(mode, c);
            row(c, {std::to_string(r.combinations), std::to_string(r.collisions), pct(r.rate())});
        }
    } else if (id == "collision-similarity") {
        columns({"collisions", "wt(x1)", "wt(m1)", "wt(x2)", "wt(m2)", "mean cross distance"});
        for (const auto& c : cells) {
            const SimilarityResult r = exp_collision_similarity(c);
            row(c, {std::to_string(r.collisions), num(r.mean_weight_x1), num(r.mean_weight_mask1),
                    num(r.mean_weight_x2), num(r.mean_weight_mask2), num(r.mean_cross_distance)});
        }
    } else if (id == "attack-simulation") {
        rep.parameters.emplace_back("fix", opts.fix ? "true" : "false");
        columns({"strategy", "success rate", "average attempts required", "invariant violations"});
        const auto strategies = resolve_strategies();
        for (const auto& c : cells) {
            for (const auto& s : strategies) {
                const AttackSimulationResult r = exp_attack_simulation(c, s, opts.fix);
                row(c, {s.name, pct(r.success_rate()), num(r.mean_attempts()),
                        std::to_string(r.invariant_violations)});
            }
        }
    } else if (id == "replay") {
        columns({"scenarios", "accepted", "violations"});
        for (const auto& c : cells) {
            const ReplayResult r = exp_replay_property(c);
            row(c, {std::to_string(r.scenarios), std::to_string(r.accepted),
                    std::to_string(r.violations)});
        }
    }
    if (!opts.strategy.empty()) rep.parameters.emplace_back("strategy", opts.strategy);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace slap
