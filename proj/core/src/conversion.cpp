#include "slap/conversion.hpp"

#include <bit>
#include <numeric>
#include <string>

namespace slap {
namespace {

void group_segment(const BitString& s, std::size_t begin, std::size_t end, std::size_t threshold,
                   std::vector<std::size_t>& out) {
    const std::size_t len = end - begin;
    if (len <= threshold) {
        out.push_back(len);
        return;
    }
    const std::size_t w = s.weight(begin, len);
    if (w == 0 || w == len) {
        out.push_back(len);
        return;
    }
    group_segment(s, begin, end - w, threshold, out);
    group_segment(s, end - w, end, threshold, out);
}

std::uint64_t rotl_small(std::uint64_t v, std::size_t len, std::size_t k) {
    if (k == 0 || k == len) return v;
    const std::uint64_t mask = len == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
    return ((v << k) | (v >> (len - k))) & mask;
}

void check_schema(const BitString& s, const DivisionSchema& schema) {
    if (schema.total() != s.size()) {
        throw std::invalid_argument("schema covers " + std::to_string(schema.total()) +
                                    " bits, string has " + std::to_string(s.size()));
    }
}

// Rotates each block of `s` (under `schema`) left by its own weight, or right
// when `inverse` is set.
BitString rotate_each(const BitString& s, const DivisionSchema& schema, bool inverse) {
    check_schema(s, schema);
    BitString out(s.size());
    std::size_t pos = 0;
    for (const std::size_t len : schema.block_lengths) {
        if (len <= 64) {
            const std::uint64_t v = s.bits(pos, len);
            const auto w = static_cast<std::size_t>(std::popcount(v));
            out.set_bits(pos, len, rotl_small(v, len, inverse ? (len - w) % len : w));
        } else {
            const BitString block = s.slice(pos, len);
            const std::size_t w = block.weight();
            const BitString r = inverse ? rotr(block, w) : rotl(block, w);
            for (std::size_t done = 0; done < len;) {
                const std::size_t chunk = (len - done) < 64 ? (len - done) : 64;
                out.set_bits(pos + done, chunk, r.bits(done, chunk));
                done += chunk;
            }
        }
        pos += len;
    }
    return out;
}

}  // namespace

std::size_t DivisionSchema::total() const noexcept {
    return std::accumulate(block_lengths.begin(), block_lengths.end(), std::size_t{0});
}

DivisionSchema grouping_schema(const BitString& s, Threshold t) {
    if (s.empty()) throw std::invalid_argument("grouping_schema: empty string");
    if (t.value < 1) throw std::invalid_argument("grouping_schema: threshold must be >= 1");
    DivisionSchema schema;
    group_segment(s, 0, s.size(), t.value, schema.block_lengths);
    return schema;
}

std::vector<BitString> split_by(const BitString& s, const DivisionSchema& schema) {
    check_schema(s, schema);
    std::vector<BitString> blocks;
    blocks.reserve(schema.block_lengths.size());
    std::size_t pos = 0;
    for (const std::size_t len : schema.block_lengths) {
        blocks.push_back(s.slice(pos, len));
        pos += len;
    }
    return blocks;
}

BitString rotation(const BitString& a, const BitString& b) {
    const std::size_t w = b.weight();
    if (w > a.size()) {
        throw std::invalid_argument("rotation: weight " + std::to_string(w) + " exceeds length " +
                                    std::to_string(a.size()));
    }
    return rotl(a, w);
}

BitString rotate_blocks(const BitString& s, const DivisionSchema& schema) {
    return rotate_each(s, schema, false);
}

BitString unrotate_blocks(const BitString& s, const DivisionSchema& schema) {
    return rotate_each(s, schema, true);
}

BitString conversion(const BitString& a, const BitString& b, Threshold t) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("conversion: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    const DivisionSchema sa = grouping_schema(a, t);
    const DivisionSchema sb = grouping_schema(b, t);
    BitString out = rotate_blocks(a, sb);
    out ^= rotate_blocks(b, sa);
    return out;
}

Preimage preimage(const BitString& target, Threshold t, std::size_t mask_ones) {
    if (mask_ones < 1 || mask_ones > kMaxMaskOnes) {
        throw std::invalid_argument("preimage: mask weight must be in 1.." +
                                    std::to_string(kMaxMaskOnes) +
                                    "; with five or more ones the mask schema is not stable");
    }
    if (target.size() <= t.value) {
        throw std::invalid_argument("preimage: target must be longer than the threshold");
    }
    const BitString mask0 = BitString::leading_ones(target.size(), mask_ones);
    BitString x0 = target;
    for (std::size_t i = 0; i < mask_ones; ++i) x0.set_bit(i, !x0.bit(i));

    Preimage out;
    out.x = unrotate_blocks(x0, grouping_schema(mask0, t));
    out.mask = unrotate_blocks(mask0, grouping_schema(out.x, t));

    if (conversion(out.x, out.mask, t) != target) {
        throw PreimageError("preimage: construction did not verify for target " +
                            target.to_string());
    }
    return out;
}

}  // namespace slap
