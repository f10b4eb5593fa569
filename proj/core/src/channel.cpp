#include "slap/channel.hpp"

#include <stdexcept>

namespace slap {

void Channel::begin_session(std::vector<ChannelRule> rules) {
    rules_ = std::move(rules);
    counts_.clear();
}

std::optional<Message> Channel::transmit(Message m, Party from, Party to) {
    const int occurrence = counts_[{from, m.kind}]++;
    const ChannelRule* rule = nullptr;
    for (const auto& r : rules_) {
        if (r.from == from && r.kind == m.kind && (!r.occurrence || *r.occurrence == occurrence)) {
            rule = &r;
            break;
        }
    }
    if (rule == nullptr) {
        transcript_.events.push_back({m, from, to, false});
        return m;
    }
    if (!rule->capture.empty()) captures_[rule->capture] = m;

    const bool intercepted = rule->block || rule->replace.has_value();
    transcript_.events.push_back({m, from, to, intercepted});
    if (rule->replace) {
        Message sub = m;
        if (rule->replace->source == Injection::Source::recorded) {
            sub = recorded(rule->replace->label);
        } else {
            sub.payload = random_bitstring(m.payload.size(), rng_);
        }
        return inject(std::move(sub), to);
    }
    if (rule->block) return std::nullopt;
    return m;
}

Message Channel::inject(Message m, Party to) {
    transcript_.events.push_back({m, Party::adversary, to, false});
    return m;
}

const Message& Channel::recorded(const std::string& label) const {
    const auto it = captures_.find(label);
    if (it == captures_.end()) throw std::out_of_range("nothing recorded under '" + label + "'");
    return it->second;
}

SessionTranscript Channel::since(std::size_t from) const {
    SessionTranscript t;
    if (from < transcript_.events.size()) {
        t.events.assign(transcript_.events.begin() + static_cast<std::ptrdiff_t>(from),
                        transcript_.events.end());
    }
    return t;
}

SessionOutcome run_reader_session(ReaderAgent& reader, TagAgent& tag, Channel& channel) {
    const std::size_t start = channel.event_count();
    tag.begin_session();
    SessionOutcome out;
    auto finish = [&](SessionStatus s) {
        out.status = s;
        out.transcript = channel.since(start);
        return out;
    };

    std::optional<std::pair<std::size_t, Slot>> match;
    for (int attempt = 0; attempt < 2 && !match; ++attempt) {
        if (!channel.transmit(make_hello(), Party::reader, Party::tag)) continue;
        const BitString id = tag.on_hello();
        const auto received = channel.transmit({MessageKind::id, id, Side::right}, Party::tag,
                                               Party::reader);
        if (received) match = reader.lookup(received->payload);
    }
    if (!match) return finish(SessionStatus::aborted_no_id);
    out.triplet_used = match->second;

    const ReaderAgent::Pending pending = reader.prepare(match->first, match->second);
    const auto a = channel.transmit({MessageKind::a, pending.A, Side::right}, Party::reader,
                                    Party::tag);
    const auto b = channel.transmit(make_half(MessageKind::b_half, select_half(pending.B)),
                                    Party::reader, Party::tag);
    if (!a || !b) return finish(SessionStatus::aborted_b_mismatch);

    const auto c = tag.on_message(a->payload, as_half(*b));
    if (!c) return finish(SessionStatus::aborted_b_mismatch);

    const auto c_msg = channel.transmit(make_half(MessageKind::c_half, *c), Party::tag,
                                        Party::reader);
    if (!c_msg || !reader.finish(pending, as_half(*c_msg))) {
        return finish(SessionStatus::aborted_c_mismatch);
    }
    return finish(SessionStatus::completed);
}

}  // namespace slap
