#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slap {

class Rng;

/// Raised for malformed textual bit strings.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fixed-length bit vector.
///
/// Position 0 is the leftmost character of the textual form, so the string
/// "1000" has its single set bit at index 0. Bits are packed MSB-first into
/// 64-bit words; unused trailing bits of the last word are always zero.
class BitString {
public:
    BitString() = default;

    /// All-zero string of the given length.
    explicit BitString(std::size_t length);

    /// Parses ASCII '0'/'1' text. Throws ParseError on any other character.
    static BitString parse(std::string_view text);

    /// `count` ones followed by zeros up to `length`.
    static BitString leading_ones(std::size_t length, std::size_t count);

    [[nodiscard]] std::size_t size() const noexcept { return length_; }
    [[nodiscard]] bool empty() const noexcept { return length_ == 0; }

    [[nodiscard]] bool bit(std::size_t index) const;
    void set_bit(std::size_t index, bool value);

    /// Number of ones.
    [[nodiscard]] std::size_t weight() const noexcept;

    /// Number of ones in [pos, pos + len).
    [[nodiscard]] std::size_t weight(std::size_t pos, std::size_t len) const;

    /// Reads up to 64 bits starting at `pos`; bit `pos` lands in the most
    /// significant position of the `len`-bit result.
    [[nodiscard]] std::uint64_t bits(std::size_t pos, std::size_t len) const;

    /// Inverse of bits(): overwrites [pos, pos + len) with the low `len` bits
    /// of `value`.
    void set_bits(std::size_t pos, std::size_t len, std::uint64_t value);

    [[nodiscard]] BitString slice(std::size_t pos, std::size_t len) const;

    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

    BitString& operator^=(const BitString& other);

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

[[nodiscard]] BitString operator^(BitString a, const BitString& b);

/// Concatenation, left operand first.
[[nodiscard]] BitString concat(std::span<const BitString> parts);

[[nodiscard]] inline std::size_t weight(const BitString& s) noexcept { return s.weight(); }

/// Number of positions where `a` and `b` differ. Lengths must match.
[[nodiscard]] std::size_t hamming_distance(const BitString& a, const BitString& b);

/// Circular left shift: the leftmost `k` bits move to the right end.
/// Requires 0 <= k <= size().
[[nodiscard]] BitString rotl(const BitString& s, std::size_t k);

/// Circular right shift; rotr(rotl(s, k), k) == s.
[[nodiscard]] BitString rotr(const BitString& s, std::size_t k);

[[nodiscard]] BitString flip_bits(BitString s, std::span<const std::size_t> positions);
[[nodiscard]] BitString flip_bits(BitString s, std::initializer_list<std::size_t> positions);

/// Uniform random string drawn from `rng`.
[[nodiscard]] BitString random_bitstring(std::size_t length, Rng& rng);

/// (first size()/2 bits, last size()/2 bits). Requires even length.
[[nodiscard]] std::pair<BitString, BitString> halves(const BitString& s);

std::ostream& operator<<(std::ostream& os, const BitString& s);

}  // namespace slap
