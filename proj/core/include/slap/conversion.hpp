#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "slap/bitstring.hpp"

namespace slap {

/// Maximum block length at which Grouping stops splitting.
struct Threshold {
    std::size_t value = 6;

    friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// Left-to-right block lengths produced by Grouping.
struct DivisionSchema {
    std::vector<std::size_t> block_lengths;

    [[nodiscard]] std::size_t total() const noexcept;
    friend bool operator==(const DivisionSchema&, const DivisionSchema&) = default;
};

/// Recursive weight-driven split of `s`.
///
/// A segment no longer than the threshold is a final block. Otherwise, with w
/// its weight, the segment splits into a left part of length len - w and a
/// right part of length w, each grouped recursively. Segments longer than the
/// threshold that are all zeros or all ones are kept whole: splitting them
/// would reproduce the same segment forever.
[[nodiscard]] DivisionSchema grouping_schema(const BitString& s, Threshold t);

/// Consecutive blocks of `s` with the lengths listed in `schema`.
[[nodiscard]] std::vector<BitString> split_by(const BitString& s, const DivisionSchema& schema);

/// Rot(a, b): rotl(a, weight(b)).
[[nodiscard]] BitString rotation(const BitString& a, const BitString& b);

/// Rot(a) = Rot(a, a).
[[nodiscard]] inline BitString rotation(const BitString& a) { return rotation(a, a); }

/// Splits `s` by `schema` and replaces each block w with Rot(w).
[[nodiscard]] BitString rotate_blocks(const BitString& s, const DivisionSchema& schema);

/// Inverse of rotate_blocks for the same schema: each block is rotated right
/// by its own weight.
[[nodiscard]] BitString unrotate_blocks(const BitString& s, const DivisionSchema& schema);

/// Conv(a, b): Grouping, schema exchange with per-block self-rotation, XOR.
[[nodiscard]] BitString conversion(const BitString& a, const BitString& b, Threshold t);

/// Thrown when a constructed preimage fails to reproduce its target.
class PreimageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Preimage {
    BitString x;
    BitString mask;
};

/// Largest mask weight for which the mask's division schema survives the
/// pre-compensating right rotations.
inline constexpr std::size_t kMaxMaskOnes = 4;

/// Builds (x, mask) with conversion(x, mask, t) == target and weight(mask)
/// == mask_ones.
///
/// The mask starts as `mask_ones` leading ones; x starts as the target with
/// its leading `mask_ones` bits complemented. Each is then right-rotated
/// blockwise under the other's schema, so the left rotations Conversion
/// applies restore them and the XOR cancels the complemented prefix.
///
/// Throws std::invalid_argument for mask_ones outside 1..4 or a target not
/// longer than the threshold; throws PreimageError if the result does not
/// verify.
[[nodiscard]] Preimage preimage(const BitString& target, Threshold t, std::size_t mask_ones);

}  // namespace slap
