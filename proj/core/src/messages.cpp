#include "slap/messages.hpp"

#include <stdexcept>
#include <string>

namespace slap {
namespace {

void require_length(const ProtocolParams& p, std::initializer_list<const BitString*> values,
                    const char* what) {
    for (const BitString* v : values) {
        if (v->size() != p.string_length) {
            throw std::invalid_argument(std::string(what) + ": expected length " +
                                        std::to_string(p.string_length) + ", got " +
                                        std::to_string(v->size()));
        }
    }
}

}  // namespace

void ProtocolParams::validate() const {
    if (string_length == 0 || string_length % 2 != 0) {
        throw std::invalid_argument("string length must be even and positive, got " +
                                    std::to_string(string_length));
    }
    if (threshold.value < 1 || string_length <= 2 * threshold.value) {
        throw std::invalid_argument("threshold " + std::to_string(threshold.value) +
                                    " must be >= 1 and below half the string length " +
                                    std::to_string(string_length));
    }
}

std::string_view to_string(Side side) noexcept { return side == Side::left ? "left" : "right"; }

HalfMessage select_half(const BitString& s) {
    auto [left, right] = halves(s);
    if (s.weight() % 2 == 0) return {std::move(right), Side::right};
    return {std::move(left), Side::left};
}

BitString build_A(const BitString& k1, const BitString& k2, const BitString& n,
                  const ProtocolParams& p) {
    require_length(p, {&k1, &k2, &n}, "build_A");
    return conversion(k1, k2, p.threshold) ^ n;
}

BitString extract_n(const BitString& A, const BitString& k1, const BitString& k2,
                    const ProtocolParams& p) {
    require_length(p, {&A, &k1, &k2}, "extract_n");
    return conversion(k1, k2, p.threshold) ^ A;
}

BitString build_B(const BitString& k1, const BitString& k2, const BitString& n,
                  const ProtocolParams& p) {
    require_length(p, {&k1, &k2, &n}, "build_B");
    const BitString rotated_k1 = rotation(k1, n);
    const BitString mixed_k2 = conversion(k2, k2 ^ n, p.threshold);
    BitString out = conversion(rotated_k1, k1 ^ k2, p.threshold);
    out ^= rotation(mixed_k2, k1);
    return out;
}

BitString build_F(const BitString& n, const BitString& A, const ProtocolParams& p) {
    require_length(p, {&n, &A}, "build_F");
    return conversion(rotation(n, A), A, p.threshold);
}

BitString build_B_fixed(const BitString& k1, const BitString& k2, const BitString& n,
                        const BitString& A, const ProtocolParams& p) {
    return build_B(k1, k2, n, p) ^ build_F(n, A, p);
}

BitString build_B_for(const BitString& k1, const BitString& k2, const BitString& n,
                      const BitString& A, const ProtocolParams& p) {
    return p.fix_enabled ? build_B_fixed(k1, k2, n, A, p) : build_B(k1, k2, n, p);
}

BitString build_C(const BitString& B, const BitString& k1, const BitString& k2, const BitString& n,
                  const BitString& id, const ProtocolParams& p) {
    require_length(p, {&B, &k1, &k2, &n, &id}, "build_C");
    const BitString left = conversion(B, k1, p.threshold);
    const BitString right = conversion(k1, k2 ^ n, p.threshold);
    return conversion(left, right, p.threshold) ^ id;
}

std::pair<BitString, BitString> update_keys(const BitString& k1, const BitString& k2,
                                            const BitString& n, const BitString& B,
                                            const ProtocolParams& p) {
    require_length(p, {&k1, &k2, &n, &B}, "update_keys");
    return {conversion(k1, n, p.threshold) ^ k2, conversion(k2, B, p.threshold) ^ k1};
}

BitString update_id(const BitString& id, const BitString& n, const BitString& B,
                    const ProtocolParams& p) {
    require_length(p, {&id, &n, &B}, "update_id");
    return conversion(id, n, p.threshold) ^ B;
}

}  // namespace slap
