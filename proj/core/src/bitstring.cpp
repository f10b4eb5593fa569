#include "slap/bitstring.hpp"

#include <bit>
#include <ostream>

#include "slap/rng.hpp"

namespace slap {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t length) { return (length + kWordBits - 1) / kWordBits; }

std::uint64_t low_mask(std::size_t len) {
    return len >= kWordBits ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
}

void check_same_length(const BitString& a, const BitString& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                    ")");
    }
}

// Reads `len` <= 64 bits starting at `pos`, wrapping around the end.
std::uint64_t cyclic_bits(const BitString& s, std::size_t pos, std::size_t len) {
    const std::size_t n = s.size();
    if (pos + len <= n) return s.bits(pos, len);
    const std::size_t first = n - pos;
    const std::size_t second = len - first;
    return (s.bits(pos, first) << second) | s.bits(0, second);
}

}  // namespace

BitString::BitString(std::size_t length) : length_(length), words_(word_count(length), 0) {}

BitString BitString::parse(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '1') {
            out.set_bit(i, true);
        } else if (c != '0') {
            throw ParseError("invalid bit character '" + std::string(1, c) + "' at position " +
                             std::to_string(i));
        }
    }
    return out;
}

BitString BitString::leading_ones(std::size_t length, std::size_t count) {
    if (count > length) throw std::invalid_argument("leading_ones: count exceeds length");
    BitString out(length);
    for (std::size_t i = 0; i < count; ++i) out.set_bit(i, true);
    return out;
}

bool BitString::bit(std::size_t index) const {
    if (index >= length_) throw std::out_of_range("bit index " + std::to_string(index));
    return (words_[index / kWordBits] >> (kWordBits - 1 - index % kWordBits)) & 1U;
}

void BitString::set_bit(std::size_t index, bool value) {
    if (index >= length_) throw std::out_of_range("bit index " + std::to_string(index));
    const std::uint64_t m = std::uint64_t{1} << (kWordBits - 1 - index % kWordBits);
    auto& w = words_[index / kWordBits];
    w = value ? (w | m) : (w & ~m);
}

std::size_t BitString::weight() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::size_t BitString::weight(std::size_t pos, std::size_t len) const {
    std::size_t total = 0;
    while (len > 0) {
        const std::size_t chunk = len < kWordBits ? len : kWordBits;
        total += static_cast<std::size_t>(std::popcount(bits(pos, chunk)));
        pos += chunk;
        len -= chunk;
    }
    return total;
}

std::uint64_t BitString::bits(std::size_t pos, std::size_t len) const {
    if (len == 0) return 0;
    if (len > kWordBits || pos + len > length_) throw std::out_of_range("bits: range out of bounds");
    const std::size_t w = pos / kWordBits;
    const std::size_t off = pos % kWordBits;
    std::uint64_t hi = words_[w] << off;
    if (off + len > kWordBits) hi |= words_[w + 1] >> (kWordBits - off);
    return hi >> (kWordBits - len);
}

void BitString::set_bits(std::size_t pos, std::size_t len, std::uint64_t value) {
    if (len == 0) return;
    if (len > kWordBits || pos + len > length_) {
        throw std::out_of_range("set_bits: range out of bounds");
    }
    const std::size_t w = pos / kWordBits;
    const std::size_t off = pos % kWordBits;
    const std::uint64_t m = low_mask(len) << (kWordBits - len);
    const std::uint64_t a = (value & low_mask(len)) << (kWordBits - len);
    words_[w] = (words_[w] & ~(m >> off)) | (a >> off);
    if (off + len > kWordBits) {
        const std::size_t back = kWordBits - off;
        words_[w + 1] = (words_[w + 1] & ~(m << back)) | (a << back);
    }
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
    if (pos + len > length_) throw std::out_of_range("slice: range out of bounds");
    BitString out(len);
    for (std::size_t done = 0; done < len;) {
        const std::size_t chunk = (len - done) < kWordBits ? (len - done) : kWordBits;
        out.set_bits(done, chunk, bits(pos + done, chunk));
        done += chunk;
    }
    return out;
}

std::string BitString::to_string() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if (bit(i)) out[i] = '1';
    }
    return out;
}

BitString& BitString::operator^=(const BitString& other) {
    check_same_length(*this, other, "xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitString operator^(BitString a, const BitString& b) {
    a ^= b;
    return a;
}

BitString concat(std::span<const BitString> parts) {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    BitString out(total);
    std::size_t at = 0;
    for (const auto& p : parts) {
        for (std::size_t done = 0; done < p.size();) {
            const std::size_t chunk = (p.size() - done) < kWordBits ? (p.size() - done) : kWordBits;
            out.set_bits(at + done, chunk, p.bits(done, chunk));
            done += chunk;
        }
        at += p.size();
    }
    return out;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
    check_same_length(a, b, "hamming_distance");
    std::size_t total = 0;
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        total += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    }
    return total;
}

BitString rotl(const BitString& s, std::size_t k) {
    const std::size_t n = s.size();
    if (k > n) {
        throw std::out_of_range("rotl: shift " + std::to_string(k) + " exceeds length " +
                                std::to_string(n));
    }
    if (k == 0 || k == n) return s;
    BitString out(n);
    for (std::size_t done = 0; done < n;) {
        const std::size_t chunk = (n - done) < kWordBits ? (n - done) : kWordBits;
        out.set_bits(done, chunk, cyclic_bits(s, (done + k) % n, chunk));
        done += chunk;
    }
    return out;
}

BitString rotr(const BitString& s, std::size_t k) {
    if (k > s.size()) {
        throw std::out_of_range("rotr: shift " + std::to_string(k) + " exceeds length " +
                                std::to_string(s.size()));
    }
    return rotl(s, k == 0 ? 0 : s.size() - k);
}

BitString flip_bits(BitString s, std::span<const std::size_t> positions) {
    for (auto p : positions) {
        if (p >= s.size()) {
            throw std::out_of_range("flip_bits: position " + std::to_string(p) + " out of range");
        }
        s.set_bit(p, !s.bit(p));
    }
    return s;
}

BitString flip_bits(BitString s, std::initializer_list<std::size_t> positions) {
    return flip_bits(std::move(s), std::span<const std::size_t>(positions.begin(), positions.size()));
}

BitString random_bitstring(std::size_t length, Rng& rng) {
    if (length < 1) throw std::invalid_argument("random_bitstring: length must be >= 1");
    BitString out(length);
    for (std::size_t done = 0; done < length;) {
        const std::size_t chunk = (length - done) < kWordBits ? (length - done) : kWordBits;
        out.set_bits(done, chunk, rng.next());
        done += chunk;
    }
    return out;
}

std::pair<BitString, BitString> halves(const BitString& s) {
    if (s.size() % 2 != 0) {
        throw std::invalid_argument("halves: odd length " + std::to_string(s.size()));
    }
    const std::size_t h = s.size() / 2;
    return {s.slice(0, h), s.slice(h, h)};
}

std::ostream& operator<<(std::ostream& os, const BitString& s) { return os << s.to_string(); }

}  // namespace slap
