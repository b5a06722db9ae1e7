#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace secpolar {

using Bit = std::uint8_t;
using Frame = std::vector<Bit>; // u^N or x^N, one byte per bit

/// Channel output symbol of a binary erasure channel.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Erased = 0xFF };

using ReceivedWord = std::vector<Symbol>;

/// Sorted, duplicate-free index set over [0, N).
using IndexSet = std::vector<std::uint32_t>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("block length must be a power of two, got " + std::to_string(n));
    unsigned k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

// ---- index set algebra (inputs sorted ascending) ----

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool set_contains(const IndexSet& a, std::uint32_t i) {
    return std::binary_search(a.begin(), a.end(), i);
}

inline bool is_subset(const IndexSet& sub, const IndexSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline IndexSet complement(const IndexSet& a, std::size_t n) {
    IndexSet out;
    out.reserve(n - a.size());
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (k < a.size() && a[k] == i) { ++k; continue; }
        out.push_back(i);
    }
    return out;
}

// ---- bit gathering / scattering over index sets ----

inline Frame gather(const Frame& v, const IndexSet& idx) {
    Frame out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
    return out;
}

inline void scatter(Frame& v, const IndexSet& idx, const Frame& bits) {
    if (idx.size() != bits.size()) throw std::invalid_argument("scatter: index/value length mismatch");
    for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] = bits[k];
}

/// Packs one bit per byte into a little-endian bit array: bit i of the
/// frame lands in byte i/8, bit position i%8. Transcript dump format.
inline std::vector<std::uint8_t> pack_bits(const Frame& f) {
    std::vector<std::uint8_t> out((f.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i]) out[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    return out;
}

inline Frame unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    Frame out(nbits, 0);
    for (std::size_t i = 0; i < nbits; ++i)
        out[i] = (bytes[i >> 3] >> (i & 7)) & 1u;
    return out;
}

} // namespace secpolar
