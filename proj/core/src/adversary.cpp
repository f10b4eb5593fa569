#include "slap/adversary.hpp"

#include <stdexcept>

namespace slap {

std::pair<std::size_t, std::size_t> FlipPair::positions(std::size_t length,
                                                        std::size_t window) const {
    if (i >= j || j >= window || window > length) {
        throw std::invalid_argument("flip pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") outside a window of " + std::to_string(window));
    }
    const std::size_t base = side == WindowSide::leftmost ? 0 : length - window;
    return {base + i, base + j};
}

std::vector<FlipPair> candidate_flips(FlipSides sides, std::size_t window) {
    std::vector<FlipPair> out;
    auto add = [&](WindowSide side) {
        for (std::size_t i = 0; i < window; ++i) {
            for (std::size_t j = i + 1; j < window; ++j) out.push_back({i, j, side});
        }
    };
    if (sides != FlipSides::rightmost) add(WindowSide::leftmost);
    if (sides != FlipSides::leftmost) add(WindowSide::rightmost);
    return out;
}

std::vector<Strategy> strategy_catalog() {
    auto left = [](std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
        std::vector<FlipPair> v;
        for (auto [i, j] : pairs) v.push_back({i, j, WindowSide::leftmost});
        return v;
    };
    return {
        {"strategy1",
         left({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}, {4, 5}})},
        {"strategy2",
         left({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 2}, {1, 3}, {0, 3}, {1, 4}, {0, 4}})},
        {"strategy3",
         left({{0, 1}, {1, 2}, {0, 2}, {2, 3}, {4, 5}, {3, 4}, {1, 3}, {0, 3}, {0, 4}, {1, 4}})},
    };
}

std::optional<Strategy> find_strategy(std::string_view name) {
    for (auto& s : strategy_catalog()) {
        if (s.name == name) return s;
    }
    if (name == "left15") return Strategy{"left15", candidate_flips(FlipSides::leftmost)};
    if (name == "right15") return Strategy{"right15", candidate_flips(FlipSides::rightmost)};
    if (name == "all30") return Strategy{"all30", candidate_flips(FlipSides::both)};
    return std::nullopt;
}

std::string AttackReport::to_text() const {
    std::string out = transcript.to_text();
    out += "# summary kind=" + kind + " success=" + (success ? "true" : "false") +
           " attempts=" + std::to_string(attempts);
    if (failed_step) out += " failed_step=" + *failed_step;
    out += " reader=" + reader_digest + " tag=" + tag_digest + "\n";
    return out;
}

// ---------------------------------------------------------------------------

AttackScript desync_script(bool block_second_session) {
    using K = MessageKind;
    AttackScript script;

    ScriptStep s1{"session1-eavesdrop", ScriptStep::Kind::reader_session, {}, 1, {},
                  StepExpectation::session_completed};
    s1.rules = {
        {Party::tag, K::id, std::nullopt, false, "s1.ID", std::nullopt},
        {Party::reader, K::a, std::nullopt, false, "s1.A", std::nullopt},
        {Party::reader, K::b_half, std::nullopt, false, "s1.B", std::nullopt},
    };
    script.push_back(s1);

    ScriptStep s2{"session2-block", ScriptStep::Kind::reader_session, {}, 1, {},
                  block_second_session ? StepExpectation::session_aborted
                                       : StepExpectation::session_completed};
    s2.rules = {
        {Party::tag, K::id, std::nullopt, false, "s2.ID", std::nullopt},
        {Party::reader, K::a, std::nullopt, block_second_session, "s2.A", std::nullopt},
        {Party::reader, K::b_half, std::nullopt, block_second_session, "s2.B", std::nullopt},
    };
    script.push_back(s2);

    // The Tag's first ID reply is swapped for a random one; the Reader falls
    // back to a second HELLO and runs the session on the old triplet.
    ScriptStep s3{"session3-force-old", ScriptStep::Kind::reader_session, {}, 1, {},
                  StepExpectation::session_completed};
    s3.rules = {
        {Party::tag, K::id, 0, true, {}, Injection{Injection::Source::random_payload, {}}},
    };
    script.push_back(s3);

    script.push_back({"session4-replay-1", ScriptStep::Kind::replay_to_tag, {}, 2, "s1",
                      StepExpectation::tag_accepts});
    script.push_back({"session5-replay-2", ScriptStep::Kind::replay_to_tag, {}, 1, "s2",
                      StepExpectation::tag_accepts});
    return script;
}

std::optional<HalfMessage> send_to_tag(TagAgent& tag, Channel& channel, int hellos,
                                              const BitString& A, const HalfMessage& b_half) {
    channel.begin_session();
    tag.begin_session();
    for (int h = 0; h < hellos; ++h) {
        channel.inject(make_hello(), Party::tag);
        const BitString id = tag.on_hello();
        (void)channel.transmit({MessageKind::id, id, Side::right}, Party::tag, Party::adversary);
    }
    channel.inject({MessageKind::a, A, Side::right}, Party::tag);
    channel.inject(make_half(MessageKind::b_half, b_half), Party::tag);
    auto c = tag.on_message(A, b_half);
    if (c) (void)channel.transmit(make_half(MessageKind::c_half, *c), Party::tag, Party::adversary);
    return c;
}

AttackReport run_script(const AttackScript& script, ReaderAgent& reader, std::size_t device,
                        TagAgent& tag, Channel& channel) {
    AttackReport report;
    report.kind = "desync";
    const std::size_t start = channel.event_count();

    for (const auto& step : script) {
        bool as_expected = false;
        if (step.kind == ScriptStep::Kind::reader_session) {
            channel.begin_session(step.rules);
            const SessionOutcome o = run_reader_session(reader, tag, channel);
            const bool completed = o.status == SessionStatus::completed;
            as_expected = (step.expect == StepExpectation::session_completed) == completed;
        } else {
            const std::string a_label = step.replay_label + ".A";
            const std::string b_label = step.replay_label + ".B";
            bool accepted = false;
            if (channel.has_recorded(a_label) && channel.has_recorded(b_label)) {
                const Message& a = channel.recorded(a_label);
                const Message& b = channel.recorded(b_label);
                accepted = send_to_tag(tag, channel, step.hellos, a.payload, as_half(b))
                               .has_value();
            }
            as_expected = (step.expect == StepExpectation::tag_accepts) == accepted;
        }
        ++report.attempts;
        if (!as_expected) {
            report.divergent_steps.push_back(step.name);
            if (!report.failed_step) report.failed_step = step.name;
        }
    }

    report.success = !share_triplet(reader.device(device), tag.state());
    report.reader_digest = digest(reader.device(device));
    report.tag_digest = digest(tag.state());
    report.transcript = channel.since(start);
    return report;
}

AttackReport desync_attack(ReaderAgent& reader, std::size_t device, TagAgent& tag,
                           Channel& channel, bool block_second_session) {
    return run_script(desync_script(block_second_session), reader, device, tag, channel);
}

// ---------------------------------------------------------------------------

Eavesdropped Eavesdropped::from_transcript(const SessionTranscript& t) {
    std::optional<BitString> id;
    std::optional<BitString> a;
    std::optional<HalfMessage> b;
    for (const auto& e : t.events) {
        if (e.message.kind == MessageKind::id && e.to == Party::reader && !e.blocked && !a) {
            id = e.message.payload;
        } else if (e.message.kind == MessageKind::a && e.from == Party::reader && !a) {
            a = e.message.payload;
        } else if (e.message.kind == MessageKind::b_half && e.from == Party::reader && !b) {
            b = as_half(e.message);
        }
    }
    if (!id || !a || !b) throw std::invalid_argument("transcript lacks ID, A or B half");
    return {*id, *a, *b};
}

AttackReport impersonation_attack(TagAgent& tag, const Eavesdropped& eavesdropped,
                                  const Strategy& strategy, Channel& channel,
                                  std::size_t max_attempts) {
    AttackReport report;
    report.kind = "impersonate";
    const std::size_t start = channel.event_count();
    const std::size_t length = tag.params().string_length;

    for (const auto& pair : strategy.flips) {
        if (report.attempts >= max_attempts) break;
        ++report.attempts;
        const auto [p, q] = pair.positions(length);
        const BitString forged = flip_bits(eavesdropped.A, {p, q});
        if (send_to_tag(tag, channel, 2, forged, eavesdropped.b_half)) {
            report.success = true;
            break;
        }
    }
    if (!report.success) report.failed_step = "candidates exhausted";
    report.tag_digest = digest(tag.state());
    report.transcript = channel.since(start);
    return report;
}

bool impersonation_invariant(const DeviceState& reader, const DeviceState& tag) {
    return tag.old_triplet == reader.old_triplet && !(tag.new_triplet == reader.new_triplet);
}

}  // namespace slap
