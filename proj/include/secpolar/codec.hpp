#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/polarization.hpp"
#include "secpolar/rng.hpp"

namespace secpolar {

/// Frozen positions and their values, indexed in u-natural order.
struct FrozenMap {
    IndexSet positions;
    Frame values;

    FrozenMap() = default;
    FrozenMap(IndexSet pos, Frame val) : positions(std::move(pos)), values(std::move(val)) {
        if (positions.size() != values.size())
            throw std::invalid_argument("FrozenMap: one value per position required");
    }

    static FrozenMap zeros(const IndexSet& pos) { return FrozenMap(pos, Frame(pos.size(), 0)); }

    // dense view: -1 for data positions, 0/1 for frozen ones
    std::vector<std::int8_t> dense(std::size_t n) const {
        std::vector<std::int8_t> d(n, -1);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            if (positions[k] >= n) throw std::invalid_argument("FrozenMap: position out of range");
            d[positions[k]] = static_cast<std::int8_t>(values[k]);
        }
        return d;
    }
};

/// x = u G_N over GF(2) with G_N = R F^{xn}: bit-reversal permutation
/// followed by the O(N log N) butterfly. Profile index i always means U^i;
/// the permutation lives here, not in the profiles.
inline Frame encode(const Frame& u) {
    const std::size_t n = u.size();
    const unsigned levels = log2_exact(n);
    Frame x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = u[detail::bit_reverse(static_cast<std::uint32_t>(i), levels)];
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t blk = 0; blk < n; blk += 2 * h)
            for (std::size_t i = blk; i < blk + h; ++i)
                x[i] ^= x[i + h];
    return x;
}

struct ScResult {
    Frame u;
    std::vector<std::uint32_t> guessed; // data positions decided by coin flip
};

namespace detail {

inline Symbol exor(Symbol a, Symbol b) {
    if (a == Symbol::Erased || b == Symbol::Erased) return Symbol::Erased;
    return static_cast<Symbol>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

// SC recursion over the plain F^{xn} tree. Evidence for this sub-code sits
// in ev[off..off+len); decisions are appended leaf by leaf in u-natural
// order. Returns the re-encoded sub-codeword in cw[off..off+len).
struct ScWorkspace {
    std::vector<Symbol> ev;
    std::vector<Symbol> cw;
    const std::vector<std::int8_t>* frozen = nullptr;
    Frame* u = nullptr;
    std::vector<std::uint32_t>* guessed = nullptr;
    Rng* rng = nullptr;
    std::uint32_t next_bit = 0;

    void run(std::size_t off, std::size_t len) {
        if (len == 1) {
            const std::uint32_t i = next_bit++;
            const std::int8_t fz = (*frozen)[i];
            Bit decision;
            if (fz >= 0) {
                decision = static_cast<Bit>(fz);
            } else if (ev[off] != Symbol::Erased) {
                decision = static_cast<Bit>(ev[off]);
            } else {
                decision = rng->bit();
                guessed->push_back(i);
            }
            (*u)[i] = decision;
            cw[off] = static_cast<Symbol>(decision);
            return;
        }
        const std::size_t h = len / 2;
        // minus branch: evidence for the left sub-codeword c_L = x_left ^ x_right
        std::vector<Symbol> saved(ev.begin() + static_cast<std::ptrdiff_t>(off),
                                  ev.begin() + static_cast<std::ptrdiff_t>(off + len));
        for (std::size_t i = 0; i < h; ++i)
            ev[off + i] = exor(saved[i], saved[i + h]);
        run(off, h);
        // plus branch: two observations of c_R, direct one wins
        for (std::size_t i = 0; i < h; ++i) {
            const Symbol direct = saved[i + h];
            const Symbol via_left = exor(saved[i], cw[off + i]);
            ev[off + h + i] = (direct != Symbol::Erased) ? direct : via_left;
        }
        // left sub-codeword estimate, then stitch x = (c_L ^ c_R, c_R)
        std::vector<Symbol> cl(cw.begin() + static_cast<std::ptrdiff_t>(off),
                               cw.begin() + static_cast<std::ptrdiff_t>(off + h));
        run(off + h, h);
        for (std::size_t i = 0; i < h; ++i)
            cw[off + i] = exor(cl[i], cw[off + h + i]);
    }
};

} // namespace detail

/// Successive-cancellation decoding in the erasure domain. Frozen
/// positions take their mapped value regardless of channel evidence; a
/// data position whose aggregate evidence is erased gets a uniformly
/// random bit from the seeded stream (positions recorded in `guessed`).
/// Exact on a BEC: over an erasure-free word the output equals the
/// encoder input.
inline ScResult sc_decode_traced(const ReceivedWord& y, const FrozenMap& frozen, std::uint64_t rng_seed) {
    const std::size_t n = y.size();
    const unsigned levels = log2_exact(n);

    detail::ScWorkspace ws;
    ws.ev.resize(n);
    ws.cw.resize(n);
    // undo the encoder's bit reversal: y' observes the plain F^{xn} codeword of u
    for (std::size_t i = 0; i < n; ++i)
        ws.ev[i] = y[detail::bit_reverse(static_cast<std::uint32_t>(i), levels)];

    const auto dense = frozen.dense(n);
    Frame u(n, 0);
    std::vector<std::uint32_t> guessed;
    Rng rng(rng_seed);
    ws.frozen = &dense;
    ws.u = &u;
    ws.guessed = &guessed;
    ws.rng = &rng;
    ws.run(0, n);
    return ScResult{std::move(u), std::move(guessed)};
}

inline Frame sc_decode(const ReceivedWord& y, const FrozenMap& frozen, std::uint64_t rng_seed) {
    return sc_decode_traced(y, frozen, rng_seed).u;
}

} // namespace secpolar
