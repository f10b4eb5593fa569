#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <utility>

#include "slap/bitstring.hpp"
#include "slap/conversion.hpp"

namespace slap {

/// String length, threshold and whether B carries the F term.
struct ProtocolParams {
    std::size_t string_length = 32;
    Threshold threshold{6};
    bool fix_enabled = false;

    /// Throws std::invalid_argument unless the length is even and greater
    /// than twice the threshold.
    void validate() const;
};

enum class Side { left, right };

[[nodiscard]] std::string_view to_string(Side side) noexcept;

/// Half of B or C as sent on the wire.
struct HalfMessage {
    BitString bits;
    Side side = Side::right;

    friend bool operator==(const HalfMessage&, const HalfMessage&) = default;
};

/// Right half when weight(s) is even, left half otherwise.
[[nodiscard]] HalfMessage select_half(const BitString& s);

/// A = Conv(k1, k2) ^ n
[[nodiscard]] BitString build_A(const BitString& k1, const BitString& k2, const BitString& n,
                                const ProtocolParams& p);

/// Recovers n from A.
[[nodiscard]] BitString extract_n(const BitString& A, const BitString& k1, const BitString& k2,
                                  const ProtocolParams& p);

/// B = Conv(Rot(k1, n), k1 ^ k2) ^ Rot(Conv(k2, k2 ^ n), k1)
[[nodiscard]] BitString build_B(const BitString& k1, const BitString& k2, const BitString& n,
                                const ProtocolParams& p);

/// F = Conv(Rot(n, A), A)
[[nodiscard]] BitString build_F(const BitString& n, const BitString& A, const ProtocolParams& p);

/// B ^ F
[[nodiscard]] BitString build_B_fixed(const BitString& k1, const BitString& k2, const BitString& n,
                                      const BitString& A, const ProtocolParams& p);

/// build_B_fixed when p.fix_enabled, build_B otherwise.
[[nodiscard]] BitString build_B_for(const BitString& k1, const BitString& k2, const BitString& n,
                                    const BitString& A, const ProtocolParams& p);

/// C = Conv(Conv(B, k1), Conv(k1, k2 ^ n)) ^ id
[[nodiscard]] BitString build_C(const BitString& B, const BitString& k1, const BitString& k2,
                                const BitString& n, const BitString& id, const ProtocolParams& p);

/// k1' = Conv(k1, n) ^ k2, k2' = Conv(k2, B) ^ k1
[[nodiscard]] std::pair<BitString, BitString> update_keys(const BitString& k1, const BitString& k2,
                                                          const BitString& n, const BitString& B,
                                                          const ProtocolParams& p);

/// Signature of the ID update rule.
using IdUpdateRule = std::function<BitString(const BitString& id, const BitString& n,
                                             const BitString& B, const ProtocolParams& p)>;

/// Default ID update: Conv(id, n) ^ B.
[[nodiscard]] BitString update_id(const BitString& id, const BitString& n, const BitString& B,
                                  const ProtocolParams& p);

}  // namespace slap
