#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "slap/adversary.hpp"
#include "slap/channel.hpp"
#include "slap/conversion.hpp"
#include "slap/experiments.hpp"
#include "slap/protocol.hpp"

namespace {

struct RunConfig {
    std::size_t length = 32;
    std::size_t threshold = 6;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    bool fix = false;
    std::string strategy;
    std::string format = "csv";
    std::string output;
    unsigned workers = 1;
    std::size_t flips = 1;
    std::size_t chains = 1;
    std::size_t mask_ones = 3;
    bool grid = false;
    std::string mode;
    bool no_block = false;

    slap::ProtocolParams params() const { return {length, slap::Threshold{threshold}, fix}; }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t require_seed(const RunConfig& c) {
    if (!c.seed) throw UsageError("--seed is required");
    return *c.seed;
}

void validate(const RunConfig& c) {
    if (c.length == 0 || c.length % 2 != 0) {
        throw UsageError("length must be a positive even number (got " + std::to_string(c.length) + ")");
    }
    if (c.threshold < 1 || 2 * c.threshold >= c.length) {
        throw UsageError("threshold must satisfy 1 <= threshold < length/2");
    }
    if (c.trials && *c.trials == 0) throw UsageError("trials must be at least 1");
    if (c.workers == 0) throw UsageError("workers must be at least 1");
    if (c.format != "csv" && c.format != "json" && c.format != "md") {
        throw UsageError("format must be csv, json or md");
    }
}

std::string header(const RunConfig& c, const std::string& command) {
    std::ostringstream out;
    out << "# command=" << command << "\n"
        << "# length=" << c.length << "\n"
        << "# threshold=" << c.threshold << "\n"
        << "# seed=" << (c.seed ? std::to_string(*c.seed) : "none") << "\n"
        << "# trials=" << c.trials.value_or(1) << "\n"
        << "# fix=" << (c.fix ? "true" : "false") << "\n";
    if (!c.strategy.empty()) out << "# strategy=" << c.strategy << "\n";
    return out.str();
}

std::string extension(const std::string& format) { return format == "md" ? "md" : format; }

// Writes to --output, else $SLAP_OUTPUT_DIR/<name>.<ext>, else stdout.
void emit(const RunConfig& c, const std::string& name, const std::string& text) {
    std::string path = c.output;
    if (path.empty()) {
        if (const char* dir = std::getenv("SLAP_OUTPUT_DIR"); dir && *dir) {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / (name + "." + extension(c.format))).string();
        }
    }
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
    std::cerr << "wrote " << path << "\n";
}

std::string render(const RunConfig& c, const slap::ExperimentReport& r) {
    if (c.format == "json") return r.to_json();
    if (c.format == "md") return r.to_markdown();
    return r.to_csv();
}

// A Reader and a Tag sharing two distinct random triplets.
struct Setup {
    slap::ReaderAgent reader;
    slap::TagAgent tag;
    slap::Channel channel;
    std::size_t handle;
};

Setup make_setup(const RunConfig& c) {
    const std::uint64_t seed = require_seed(c);
    const slap::ProtocolParams p = c.params();
    slap::Rng init = slap::Rng::substream(seed, 1);
    const slap::DeviceState state{slap::random_triplet(p, init), slap::random_triplet(p, init)};
    Setup s{slap::ReaderAgent(p, slap::Rng::substream(seed, 0)), slap::TagAgent(state, p),
            slap::Channel(slap::Rng::substream(seed, 2)), 0};
    s.handle = s.reader.enroll(state);
    return s;
}

int cmd_simulate(const RunConfig& c) {
    Setup s = make_setup(c);
    const std::uint64_t sessions = c.trials.value_or(1);
    std::ostringstream out;
    out << header(c, "simulate");
    std::uint64_t completed = 0;
    for (std::uint64_t i = 0; i < sessions; ++i) {
        s.channel.begin_session();
        const slap::SessionOutcome o = slap::run_reader_session(s.reader, s.tag, s.channel);
        out << "# session " << i + 1 << " status=" << slap::to_string(o.status);
        if (o.triplet_used) out << " triplet=" << slap::to_string(*o.triplet_used);
        out << "\n" << o.transcript.to_text();
        completed += o.status == slap::SessionStatus::completed;
    }
    const bool synced = s.reader.device(s.handle) == s.tag.state();
    out << "# summary sessions=" << sessions << " completed=" << completed
        << " synchronized=" << (synced ? "true" : "false")
        << " reader=" << slap::digest(s.reader.device(s.handle))
        << " tag=" << slap::digest(s.tag.state()) << "\n";
    emit(c, "simulate", out.str());
    return completed == sessions && synced ? 0 : 1;
}

int cmd_desync(const RunConfig& c) {
    Setup s = make_setup(c);
    const slap::AttackReport r =
        slap::desync_attack(s.reader, s.handle, s.tag, s.channel, !c.no_block);
    std::string text = header(c, "attack desync");
    text += "# block_second_session=" + std::string(c.no_block ? "false" : "true") + "\n";
    text += r.to_text();
    emit(c, "desync", text);
    return 0;
}

slap::Strategy resolve_strategy(const RunConfig& c) {
    const std::string name = c.strategy.empty() ? "all30" : c.strategy;
    auto s = slap::find_strategy(name);
    if (!s) {
        throw UsageError("unknown strategy '" + name +
                         "' (known: strategy1, strategy2, strategy3, left15, right15, all30)");
    }
    return *s;
}

int cmd_impersonate(const RunConfig& c) {
    const slap::Strategy strategy = resolve_strategy(c);
    if (c.trials.value_or(1) > 1) {
        slap::ExperimentOptions o;
        o.config = {c.length, slap::Threshold{c.threshold}, *c.trials, require_seed(c), c.workers};
        o.strategy = strategy.name;
        o.fix = c.fix;
        emit(c, "impersonate", render(c, slap::run_experiment("attack-simulation", o)));
        return 0;
    }
    Setup s = make_setup(c);
    s.channel.begin_session();
    const slap::SessionOutcome honest = slap::run_reader_session(s.reader, s.tag, s.channel);
    if (honest.status != slap::SessionStatus::completed) {
        throw std::runtime_error("honest session did not complete");
    }
    const auto ev = slap::Eavesdropped::from_transcript(honest.transcript);
    slap::AttackReport r =
        slap::impersonation_attack(s.tag, ev, strategy, s.channel, strategy.flips.size());
    r.reader_digest = slap::digest(s.reader.device(s.handle));
    std::string text = header(c, "attack impersonate");
    text += "# eavesdropped session\n" + honest.transcript.to_text();
    text += r.to_text();
    if (r.success) {
        const bool ok = slap::impersonation_invariant(s.reader.device(s.handle), s.tag.state());
        text += std::string("# invariant old_shared_new_diverged=") + (ok ? "true" : "false") + "\n";
    }
    emit(c, "impersonate", text);
    return 0;
}

int cmd_analyze(const RunConfig& c, const std::string& id) {
    slap::ExperimentOptions o;
    o.config = {c.length, slap::Threshold{c.threshold}, c.trials.value_or(100000), require_seed(c),
                c.workers};
    o.grid = c.grid;
    o.flips = c.flips;
    o.chains = c.chains;
    o.mode = c.mode;
    o.strategy = c.strategy;
    o.fix = c.fix;
    const slap::ExperimentReport r = slap::run_experiment(id, o);
    emit(c, id, render(c, r));
    return 0;
}

int cmd_reverse(const RunConfig& c, const std::string& target_text) {
    const slap::BitString target = slap::BitString::parse(target_text);
    const slap::Threshold t{c.threshold};
    const slap::Preimage pre = slap::preimage(target, t, c.mask_ones);
    const bool verified = slap::conversion(pre.x, pre.mask, t) == target;
    std::ostringstream out;
    out << "# command=reverse\n# threshold=" << c.threshold << "\n# mask_ones=" << c.mask_ones
        << "\n"
        << "target " << target << "\n"
        << "x      " << pre.x << "\n"
        << "mask   " << pre.mask << "\n"
        << (verified ? "verified" : "NOT verified") << "\n";
    emit(c, "reverse", out.str());
    return verified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLAP protocol simulator, attacks and experiment harness", "slap"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");

    RunConfig c;
    app.add_option("--length", c.length, "String length in bits (even)")->capture_default_str();
    app.add_option("--threshold", c.threshold, "Conversion threshold T")->capture_default_str();
    app.add_option("--seed", c.seed, "Master seed (required except for reverse)");
    app.add_option("--trials", c.trials, "Sessions, attack trials or experiment trials");
    app.add_flag("--fix", c.fix, "Use B xor F in place of B");
    app.add_option("--strategy", c.strategy, "strategy1..3, left15, right15 or all30");
    app.add_option("--format", c.format, "csv, json or md")->capture_default_str();
    app.add_option("--output,-o", c.output, "Output file ('-' for stdout)");
    app.add_option("--workers", c.workers, "Worker threads for experiments")->capture_default_str();
    app.add_option("--flips", c.flips, "Bits flipped per step (diffusion)")->capture_default_str();
    app.add_option("--chains", c.chains, "Independent chains (diffusion)")->capture_default_str();
    app.add_option("--mask-ones", c.mask_ones, "Mask weight for reverse (1..4)")->capture_default_str();
    app.add_flag("--grid", c.grid, "Run every (length, threshold) cell of the tables");
    app.add_option("--mode", c.mode, "1v1|2v2 for collision-search; all30|left15|right15 for fix-eval");

    auto* simulate = app.add_subcommand("simulate", "Run honest sessions and print transcripts");
    auto* attack = app.add_subcommand("attack", "Run an attack");
    attack->require_subcommand(1);
    auto* desync = attack->add_subcommand("desync", "Five-session desynchronization script");
    desync->add_flag("--no-block", c.no_block, "Do not block session 2 (ablation)");
    auto* impersonate = attack->add_subcommand("impersonate", "Flip attack against the Tag");

    std::string experiment;
    std::string known;
    for (const auto& id : slap::experiment_ids()) known += (known.empty() ? "" : ", ") + id;
    auto* analyze = app.add_subcommand("analyze", "Run an experiment and write its report");
    analyze->add_option("experiment", experiment, "One of: " + known)->required();

    std::string target;
    auto* reverse = app.add_subcommand("reverse", "Build a Conversion preimage for a target");
    reverse->add_option("target", target, "Target bit string")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        validate(c);
        if (*simulate) return cmd_simulate(c);
        if (*desync) return cmd_desync(c);
        if (*impersonate) return cmd_impersonate(c);
        if (*analyze) return cmd_analyze(c, experiment);
        if (*reverse) return cmd_reverse(c, target);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const slap::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
