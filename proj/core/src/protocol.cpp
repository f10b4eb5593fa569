#include "slap/protocol.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace slap {

Triplet random_triplet(const ProtocolParams& p, Rng& rng) {
    Triplet t;
    t.id = random_bitstring(p.string_length, rng);
    t.k1 = random_bitstring(p.string_length, rng);
    t.k2 = random_bitstring(p.string_length, rng);
    return t;
}

std::string_view to_string(Slot slot) noexcept {
    return slot == Slot::old_triplet ? "old" : "new";
}

DeviceState apply_update(const DeviceState& state, Slot used, Triplet next) {
    if (used == Slot::new_triplet) return {state.new_triplet, std::move(next)};
    return {state.old_triplet, std::move(next)};
}

Triplet derive_next(const Triplet& t, const BitString& n, const BitString& B,
                    const ProtocolParams& p, const IdUpdateRule& id_rule) {
    auto [k1, k2] = update_keys(t.k1, t.k2, n, B, p);
    return {id_rule(t.id, n, B, p), std::move(k1), std::move(k2)};
}

bool share_triplet(const DeviceState& a, const DeviceState& b) {
    for (const auto* x : {&a.old_triplet, &a.new_triplet}) {
        for (const auto* y : {&b.old_triplet, &b.new_triplet}) {
            if (*x == *y) return true;
        }
    }
    return false;
}

std::string digest(const DeviceState& state) {
    // FNV-1a over the packed words of all six strings.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto* t : {&state.old_triplet, &state.new_triplet}) {
        for (const auto* s : {&t->id, &t->k1, &t->k2}) {
            for (const auto w : s->words()) {
                for (int i = 0; i < 8; ++i) {
                    h ^= (w >> (8 * i)) & 0xFFU;
                    h *= 0x100000001b3ULL;
                }
            }
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------

Message make_hello() { return {MessageKind::hello, {}, Side::right}; }

Message make_half(MessageKind kind, const HalfMessage& half) { return {kind, half.bits, half.side}; }

HalfMessage as_half(const Message& m) { return {m.payload, m.side}; }

namespace {

std::string_view party_name(Party p) {
    switch (p) {
        case Party::reader: return "reader";
        case Party::tag: return "tag";
        case Party::adversary: return "adversary";
    }
    return "?";
}

Party parse_party(std::string_view s) {
    if (s == "reader") return Party::reader;
    if (s == "tag") return Party::tag;
    if (s == "adversary") return Party::adversary;
    throw ParseError("unknown party '" + std::string(s) + "'");
}

std::string kind_token(const Message& m) {
    switch (m.kind) {
        case MessageKind::hello: return "HELLO";
        case MessageKind::id: return "ID";
        case MessageKind::a: return "A";
        case MessageKind::b_half: return m.side == Side::left ? "B_L" : "B_R";
        case MessageKind::c_half: return m.side == Side::left ? "C_L" : "C_R";
    }
    return "?";
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_event(const TranscriptEvent& e) {
    std::string out = kind_token(e.message);
    out += " | ";
    out += party_name(e.from);
    out += e.blocked ? "-x->" : "->";
    out += party_name(e.to);
    out += " | ";
    out += e.message.kind == MessageKind::hello ? std::string("-") : e.message.payload.to_string();
    return out;
}

TranscriptEvent parse_event(std::string_view line) {
    const auto p1 = line.find('|');
    const auto p2 = p1 == std::string_view::npos ? p1 : line.find('|', p1 + 1);
    if (p2 == std::string_view::npos) throw ParseError("transcript line needs three fields");
    const auto kind = trim(line.substr(0, p1));
    const auto dir = trim(line.substr(p1 + 1, p2 - p1 - 1));
    const auto payload = trim(line.substr(p2 + 1));

    TranscriptEvent e;
    if (kind == "HELLO") {
        e.message = make_hello();
    } else if (kind == "ID" || kind == "A") {
        e.message.kind = kind == "ID" ? MessageKind::id : MessageKind::a;
    } else if (kind == "B_L" || kind == "B_R" || kind == "C_L" || kind == "C_R") {
        e.message.kind = kind[0] == 'B' ? MessageKind::b_half : MessageKind::c_half;
        e.message.side = kind[2] == 'L' ? Side::left : Side::right;
    } else {
        throw ParseError("unknown message kind '" + std::string(kind) + "'");
    }
    if (e.message.kind != MessageKind::hello) e.message.payload = BitString::parse(payload);

    auto arrow = dir.find("-x->");
    std::size_t arrow_len = 4;
    if (arrow != std::string_view::npos) {
        e.blocked = true;
    } else {
        arrow = dir.find("->");
        arrow_len = 2;
        if (arrow == std::string_view::npos) throw ParseError("direction needs '->'");
    }
    e.from = parse_party(dir.substr(0, arrow));
    e.to = parse_party(dir.substr(arrow + arrow_len));
    return e;
}

void SessionTranscript::append(const SessionTranscript& other) {
    events.insert(events.end(), other.events.begin(), other.events.end());
}

std::string SessionTranscript::to_text() const {
    std::string out;
    for (const auto& e : events) {
        out += format_event(e);
        out += '\n';
    }
    return out;
}

SessionTranscript SessionTranscript::parse(std::string_view text) {
    SessionTranscript t;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        if (!line.empty() && line.front() != '#') t.events.push_back(parse_event(line));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return t;
}

// ---------------------------------------------------------------------------

TagAgent::TagAgent(DeviceState state, ProtocolParams params, IdUpdateRule id_rule)
    : state_(std::move(state)), params_(params), id_rule_(std::move(id_rule)) {
    params_.validate();
}

BitString TagAgent::on_hello() {
    hellos_ = hellos_ % 2 + 1;
    selected_ = hellos_ == 1 ? Slot::new_triplet : Slot::old_triplet;
    return state_.at(*selected_).id;
}

std::optional<HalfMessage> TagAgent::on_message(const BitString& A, const HalfMessage& b_half) {
    const std::optional<Slot> slot = selected_;
    begin_session();
    if (!slot || A.size() != params_.string_length ||
        b_half.bits.size() != params_.string_length / 2) {
        return std::nullopt;
    }
    const Triplet& t = state_.at(*slot);
    const BitString n = extract_n(A, t.k1, t.k2, params_);
    const BitString B = build_B_for(t.k1, t.k2, n, A, params_);
    if (select_half(B) != b_half) return std::nullopt;

    HalfMessage c_half = select_half(build_C(B, t.k1, t.k2, n, t.id, params_));
    Triplet next = derive_next(t, n, B, params_, id_rule_);
    state_ = apply_update(state_, *slot, std::move(next));
    return c_half;
}

std::string_view to_string(SessionStatus s) noexcept {
    switch (s) {
        case SessionStatus::completed: return "completed";
        case SessionStatus::aborted_no_id: return "aborted_no_id";
        case SessionStatus::aborted_b_mismatch: return "aborted_b_mismatch";
        case SessionStatus::aborted_c_mismatch: return "aborted_c_mismatch";
    }
    return "?";
}

ReaderAgent::ReaderAgent(ProtocolParams params, Rng rng, IdUpdateRule id_rule)
    : params_(params), rng_(std::move(rng)), id_rule_(std::move(id_rule)) {
    params_.validate();
}

std::size_t ReaderAgent::enroll(const DeviceState& state) {
    devices_.push_back(state);
    reindex(devices_.size() - 1);
    return devices_.size() - 1;
}

void ReaderAgent::reindex(std::size_t handle) {
    std::erase_if(index_, [handle](const auto& kv) { return kv.second == handle; });
    const DeviceState& d = devices_[handle];
    index_[d.old_triplet.id.to_string()] = handle;
    index_[d.new_triplet.id.to_string()] = handle;
}

std::optional<std::pair<std::size_t, Slot>> ReaderAgent::lookup(const BitString& id) const {
    const auto it = index_.find(id.to_string());
    if (it == index_.end()) return std::nullopt;
    const DeviceState& d = devices_[it->second];
    return std::pair{it->second, d.new_triplet.id == id ? Slot::new_triplet : Slot::old_triplet};
}

ReaderAgent::Pending ReaderAgent::prepare(std::size_t device, Slot slot) {
    const Triplet& t = devices_.at(device).at(slot);
    Pending p{device, slot, random_bitstring(params_.string_length, rng_), {}, {}};
    p.A = build_A(t.k1, t.k2, p.n, params_);
    p.B = build_B_for(t.k1, t.k2, p.n, p.A, params_);
    return p;
}

bool ReaderAgent::finish(const Pending& pending, const HalfMessage& c_half) {
    DeviceState& d = devices_.at(pending.device);
    const Triplet& t = d.at(pending.slot);
    const BitString C = build_C(pending.B, t.k1, t.k2, pending.n, t.id, params_);
    if (select_half(C) != c_half) return false;
    Triplet next = derive_next(t, pending.n, pending.B, params_, id_rule_);
    d = apply_update(d, pending.slot, std::move(next));
    reindex(pending.device);
    return true;
}

}  // namespace slap
