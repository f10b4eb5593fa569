#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slap/protocol.hpp"
#include "slap/rng.hpp"

namespace slap {

/// Replacement payload the adversary delivers in place of a message.
struct Injection {
    enum class Source { recorded, random_payload };
    Source source = Source::random_payload;
    std::string label;  // for Source::recorded
};

/// One adversary instruction for messages crossing the channel.
///
/// A rule matches messages of `kind` sent by `from`; with `occurrence` set it
/// matches only the n-th such message (0-based) within the current session.
/// The first matching rule wins. Unmatched messages pass untouched.
struct ChannelRule {
    Party from = Party::reader;
    MessageKind kind = MessageKind::a;
    std::optional<int> occurrence;
    bool block = false;
    std::string capture;              // store the payload under this label
    std::optional<Injection> replace;  // deliver this instead of the original
};

/// Adversarial channel between Reader and Tag: passes, records, blocks and
/// injects messages according to the current rules, and logs every event.
class Channel {
public:
    explicit Channel(Rng rng = Rng(0)) : rng_(std::move(rng)) {}

    /// Clears per-session counters and installs `rules` for the next session.
    void begin_session(std::vector<ChannelRule> rules = {});

    /// Sends `m` from `from` towards `to`. Returns what the receiver gets, or
    /// nothing when the message is blocked.
    std::optional<Message> transmit(Message m, Party from, Party to);

    /// Adversary-originated message to `to`; always delivered.
    Message inject(Message m, Party to);

    /// Message captured earlier under `label`.
    [[nodiscard]] const Message& recorded(const std::string& label) const;
    [[nodiscard]] bool has_recorded(const std::string& label) const {
        return captures_.count(label) != 0;
    }

    [[nodiscard]] const SessionTranscript& transcript() const noexcept { return transcript_; }
    [[nodiscard]] std::size_t event_count() const noexcept { return transcript_.events.size(); }

    /// Events from index `from` onwards.
    [[nodiscard]] SessionTranscript since(std::size_t from) const;

private:
    Rng rng_;
    std::vector<ChannelRule> rules_;
    std::map<std::pair<Party, MessageKind>, int> counts_;
    std::map<std::string, Message> captures_;
    SessionTranscript transcript_;
};

/// One Reader-initiated session through `channel`: HELLO, ID lookup with a
/// single fallback HELLO, A and B half, C half verification and update.
SessionOutcome run_reader_session(ReaderAgent& reader, TagAgent& tag, Channel& channel);

}  // namespace slap
