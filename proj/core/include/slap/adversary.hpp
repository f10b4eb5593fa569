#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slap/channel.hpp"
#include "slap/protocol.hpp"

namespace slap {

enum class WindowSide { leftmost, rightmost };

/// Two positions to complement in A, relative to a window at one end of
/// the string. Window offsets count from the left edge of the window, so
/// (0, 1) on the rightmost side of a 32-bit string flips positions 26 and 27.
struct FlipPair {
    std::size_t i = 0;
    std::size_t j = 1;
    WindowSide side = WindowSide::leftmost;

    /// Absolute left-to-right positions in a string of `length` bits.
    [[nodiscard]] std::pair<std::size_t, std::size_t> positions(std::size_t length,
                                                                std::size_t window = 6) const;

    friend bool operator==(const FlipPair&, const FlipPair&) = default;
};

/// Ordered list of flips to try.
struct Strategy {
    std::string name;
    std::vector<FlipPair> flips;
};

enum class FlipSides { leftmost, rightmost, both };

/// Every unordered pair inside the window, leftmost window first.
[[nodiscard]] std::vector<FlipPair> candidate_flips(FlipSides sides, std::size_t window = 6);

/// Strategies 1-3: ten left-window pairs each, skipping the five weakest.
[[nodiscard]] std::vector<Strategy> strategy_catalog();

/// Looks a strategy up by name ("strategy1".."strategy3", "left15", "all30").
[[nodiscard]] std::optional<Strategy> find_strategy(std::string_view name);

/// Outcome of an attack run, with the channel log of everything it did.
struct AttackReport {
    std::string kind;
    bool success = false;
    std::size_t attempts = 0;
    std::optional<std::string> failed_step;    // first step that diverged
    std::vector<std::string> divergent_steps;  // every step that diverged
    std::string reader_digest;
    std::string tag_digest;
    SessionTranscript transcript;

    /// Transcript lines followed by a "# summary" record.
    [[nodiscard]] std::string to_text() const;
};

// ---------------------------------------------------------------------------
// Scripted attacks

/// What a script step is expected to produce.
enum class StepExpectation { session_completed, session_aborted, tag_accepts, tag_rejects };

/// One step of a scripted attack. A reader_session step lets the Reader run
/// a session while `rules` steer the channel; a replay_to_tag step has the
/// adversary send `hellos` HELLOs to the Tag and then the A and B-half
/// recorded under "<replay_label>.A" and "<replay_label>.B".
struct ScriptStep {
    enum class Kind { reader_session, replay_to_tag };

    std::string name;
    Kind kind = Kind::reader_session;
    std::vector<ChannelRule> rules;
    int hellos = 1;
    std::string replay_label;
    StepExpectation expect = StepExpectation::session_completed;
};

using AttackScript = std::vector<ScriptStep>;

/// The five-session generalized desynchronization script. With
/// `block_second_session` false, session 2 is only eavesdropped.
[[nodiscard]] AttackScript desync_script(bool block_second_session = true);

/// Runs `script`; the attack succeeds when Reader and Tag share no triplet
/// afterwards. `device` is the Reader's handle for the Tag.
AttackReport run_script(const AttackScript& script, ReaderAgent& reader, std::size_t device,
                        TagAgent& tag, Channel& channel);

/// desync_script() against a synchronized pair.
AttackReport desync_attack(ReaderAgent& reader, std::size_t device, TagAgent& tag,
                           Channel& channel, bool block_second_session = true);

// ---------------------------------------------------------------------------
// Impersonation

/// Values an eavesdropper keeps from one completed honest session.
struct Eavesdropped {
    BitString id;
    BitString A;
    HalfMessage b_half;

    /// Pulls the ID the Reader accepted, A and the B half out of a completed
    /// session's transcript.
    [[nodiscard]] static Eavesdropped from_transcript(const SessionTranscript& t);
};

/// Adversary-driven exchange with the Tag: `hellos` HELLOs, then A and the
/// B half. Returns the C half if the Tag accepted.
std::optional<HalfMessage> send_to_tag(TagAgent& tag, Channel& channel, int hellos,
                                       const BitString& A, const HalfMessage& b_half);

/// Tries each flip of `strategy` in order: two HELLOs to make the Tag answer
/// with its old ID, then A with the pair flipped plus the eavesdropped B half.
/// Success is a C half coming back. Stops after `max_attempts`.
AttackReport impersonation_attack(TagAgent& tag, const Eavesdropped& eavesdropped,
                                  const Strategy& strategy, Channel& channel,
                                  std::size_t max_attempts);

/// After a successful impersonation the Tag still shares the old triplet
/// with the Reader but has moved its new triplet somewhere the Reader does
/// not know.
[[nodiscard]] bool impersonation_invariant(const DeviceState& reader, const DeviceState& tag);

}  // namespace slap
