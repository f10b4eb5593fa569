#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slap/bitstring.hpp"
#include "slap/messages.hpp"
#include "slap/rng.hpp"

namespace slap {

/// Shared authentication state: an identifier and its two keys.
struct Triplet {
    BitString id;
    BitString k1;
    BitString k2;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Random triplet of the configured length.
[[nodiscard]] Triplet random_triplet(const ProtocolParams& p, Rng& rng);

enum class Slot { old_triplet, new_triplet };

[[nodiscard]] std::string_view to_string(Slot slot) noexcept;

/// What a Tag or the Reader's database stores for one device.
struct DeviceState {
    Triplet old_triplet;
    Triplet new_triplet;

    [[nodiscard]] const Triplet& at(Slot slot) const noexcept {
        return slot == Slot::old_triplet ? old_triplet : new_triplet;
    }

    /// Both slots hold `t`. Used when provisioning a fresh device.
    [[nodiscard]] static DeviceState bootstrap(const Triplet& t) { return {t, t}; }

    friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

/// Stores the derived triplet after a completed session on `used`.
/// Using the new triplet shifts it into the old slot; using the old triplet
/// only replaces the new slot.
[[nodiscard]] DeviceState apply_update(const DeviceState& state, Slot used, Triplet next);

/// Triplet the devices move to after a session on `t` with nonce `n` and
/// B message `B`.
[[nodiscard]] Triplet derive_next(const Triplet& t, const BitString& n, const BitString& B,
                                  const ProtocolParams& p, const IdUpdateRule& id_rule);

/// True when the two states have at least one triplet in common.
[[nodiscard]] bool share_triplet(const DeviceState& a, const DeviceState& b);

/// Short hex digest of a state, for transcripts and reports.
[[nodiscard]] std::string digest(const DeviceState& state);

// ---------------------------------------------------------------------------
// Wire messages and transcripts

enum class MessageKind { hello, id, a, b_half, c_half };

enum class Party { reader, tag, adversary };

struct Message {
    MessageKind kind = MessageKind::hello;
    BitString payload;        // empty for HELLO
    Side side = Side::right;  // meaningful for b_half / c_half
};

[[nodiscard]] Message make_hello();
[[nodiscard]] Message make_half(MessageKind kind, const HalfMessage& half);
[[nodiscard]] HalfMessage as_half(const Message& m);

/// One line of a transcript.
struct TranscriptEvent {
    Message message;
    Party from = Party::reader;
    Party to = Party::tag;
    bool blocked = false;  // sent but intercepted, never delivered
};

/// Ordered channel events. Text form is one event per line:
///
///     <kind> | <direction> | <payload>
///
/// kind is HELLO, ID, A, B_L, B_R, C_L or C_R. direction is sender->receiver
/// using reader, tag and adversary, written sender-x->receiver when the
/// adversary blocked the message. HELLO carries payload "-".
struct SessionTranscript {
    std::vector<TranscriptEvent> events;

    void append(const SessionTranscript& other);
    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] static SessionTranscript parse(std::string_view text);
};

[[nodiscard]] std::string format_event(const TranscriptEvent& e);
[[nodiscard]] TranscriptEvent parse_event(std::string_view line);

// ---------------------------------------------------------------------------
// Agents

/// Tag side. Deterministic: never draws randomness.
class TagAgent {
public:
    TagAgent(DeviceState state, ProtocolParams params, IdUpdateRule id_rule = update_id);

    /// Field power-up between sessions: forgets any pending HELLO exchange.
    void begin_session() noexcept { hellos_ = 0; selected_.reset(); }

    /// First HELLO answers with the new ID, an immediately following second
    /// HELLO with the old ID; a third starts over with the new ID.
    BitString on_hello();

    /// Handles (A, B-half) for the triplet picked by the preceding HELLO.
    /// Returns the C half and updates storage on a match; returns nothing and
    /// leaves storage untouched otherwise.
    std::optional<HalfMessage> on_message(const BitString& A, const HalfMessage& b_half);

    [[nodiscard]] const DeviceState& state() const noexcept { return state_; }
    [[nodiscard]] const ProtocolParams& params() const noexcept { return params_; }

private:
    DeviceState state_;
    ProtocolParams params_;
    IdUpdateRule id_rule_;
    int hellos_ = 0;
    std::optional<Slot> selected_;
};

enum class SessionStatus { completed, aborted_no_id, aborted_b_mismatch, aborted_c_mismatch };

[[nodiscard]] std::string_view to_string(SessionStatus s) noexcept;

struct SessionOutcome {
    SessionStatus status = SessionStatus::aborted_no_id;
    std::optional<Slot> triplet_used;
    SessionTranscript transcript;
};

/// Reader side with an in-process key database indexed by both IDs of every
/// enrolled device.
class ReaderAgent {
public:
    ReaderAgent(ProtocolParams params, Rng rng, IdUpdateRule id_rule = update_id);

    /// Adds a device; returns its handle.
    std::size_t enroll(const DeviceState& state);

    [[nodiscard]] const DeviceState& device(std::size_t handle) const { return devices_.at(handle); }
    [[nodiscard]] std::size_t device_count() const noexcept { return devices_.size(); }
    [[nodiscard]] const ProtocolParams& params() const noexcept { return params_; }

    /// Finds the device and slot an ID belongs to.
    [[nodiscard]] std::optional<std::pair<std::size_t, Slot>> lookup(const BitString& id) const;

    /// Pending session after an ID matched.
    struct Pending {
        std::size_t device = 0;
        Slot slot = Slot::new_triplet;
        BitString n;
        BitString A;
        BitString B;
    };

    /// Draws n and builds A and B for the matched triplet.
    Pending prepare(std::size_t device, Slot slot);

    /// Verifies the returned C half; updates storage on a match. Returns
    /// whether it matched.
    bool finish(const Pending& pending, const HalfMessage& c_half);

private:
    void reindex(std::size_t handle);

    ProtocolParams params_;
    Rng rng_;
    IdUpdateRule id_rule_;
    std::vector<DeviceState> devices_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace slap
