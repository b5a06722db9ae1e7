// Test-only reference machinery, deliberately independent of the library's
// butterfly implementations: the generator matrix is built by explicit
// Kronecker products plus a row permutation, Bhattacharyya parameters by
// enumerating all erasure patterns, and decoding by enumerating all
// consistent completions. Only usable at toy sizes (N <= 8 or so).
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/polarization.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<std::uint8_t>>;

inline std::uint32_t bit_reverse(std::uint32_t v, unsigned nbits) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < nbits; ++b) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

// G_N = R F^{xn} with F = [[1,0],[1,1]]: row i of G is row bitrev(i) of F^{xn}
inline Matrix generator(unsigned levels) {
    Matrix f{{1}};
    for (unsigned l = 0; l < levels; ++l) {
        const std::size_t m = f.size();
        Matrix next(2 * m, std::vector<std::uint8_t>(2 * m, 0));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                next[r][c] = f[r][c];
                next[r + m][c] = f[r][c];
                next[r + m][c + m] = f[r][c];
            }
        f = std::move(next);
    }
    const std::size_t n = f.size();
    Matrix g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = f[bit_reverse(static_cast<std::uint32_t>(i), levels)];
    return g;
}

inline secpolar::Frame mat_encode(const Matrix& g, const secpolar::Frame& u) {
    const std::size_t n = g.size();
    secpolar::Frame x(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        std::uint8_t acc = 0;
        for (std::size_t r = 0; r < n; ++r) acc ^= static_cast<std::uint8_t>(u[r] & g[r][c]);
        x[c] = acc;
    }
    return x;
}

inline unsigned rank_gf2(std::vector<std::uint32_t> rows) {
    unsigned rank = 0;
    for (unsigned col = 0; col < 32; ++col) {
        const std::uint32_t bit = 1u << col;
        std::size_t pivot = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (rows[r] & bit) {
                pivot = r;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
        if (++rank == rows.size()) break;
    }
    return rank;
}

/// Exact Z(U^i | U^{1:i-1}, Y^N) for the BEC profile by summing the
/// probabilities of every erasure pattern under which u_i stays
/// undetermined (row i escapes the span of the later rows on the unerased
/// columns).
inline std::vector<double> brute_z(const std::vector<double>& eps) {
    const std::size_t n = eps.size();
    const unsigned levels = secpolar::log2_exact(n);
    const Matrix g = generator(levels);
    std::vector<double> z(n, 0.0);
    for (std::uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
        double prob = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            prob *= (pattern >> j) & 1u ? eps[j] : 1.0 - eps[j];
        if (prob == 0.0) continue;
        // row masks restricted to unerased columns
        std::vector<std::uint32_t> restricted(n, 0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (!((pattern >> c) & 1u) && g[r][c]) restricted[r] |= 1u << c;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> later(restricted.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                             restricted.end());
            const unsigned without = rank_gf2(later);
            later.push_back(restricted[i]);
            const unsigned with = rank_gf2(later);
            if (with == without) z[i] += prob; // u_i not determined
        }
    }
    return z;
}

/// Reference SC semantics by enumeration: given the decoder's own prefix
/// decisions, u_i is forced iff every completion of (u_i..u_{N-1})
/// consistent with the unerased outputs agrees on u_i. Future frozen bits
/// are left free, matching plain successive cancellation. Returns nullopt
/// if no completion exists (possible after a wrong coin-flip decision).
inline std::optional<std::pair<bool, secpolar::Bit>>
forced_bit(const Matrix& g, const secpolar::ReceivedWord& y, const secpolar::Frame& prefix, std::size_t i) {
    const std::size_t n = g.size();
    bool seen = false;
    bool both[2] = {false, false};
    for (std::uint32_t tail = 0; tail < (1u << (n - i)); ++tail) {
        secpolar::Frame u(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(i));
        u.resize(n);
        for (std::size_t k = i; k < n; ++k) u[k] = (tail >> (k - i)) & 1u;
        const secpolar::Frame x = mat_encode(g, u);
        bool ok = true;
        for (std::size_t c = 0; c < n && ok; ++c)
            if (y[c] != secpolar::Symbol::Erased &&
                static_cast<secpolar::Bit>(y[c]) != x[c]) ok = false;
        if (ok) {
            seen = true;
            both[u[i]] = true;
        }
    }
    if (!seen) return std::nullopt;
    if (both[0] && both[1]) return std::make_pair(false, secpolar::Bit{0});
    return std::make_pair(true, static_cast<secpolar::Bit>(both[1] ? 1 : 0));
}

} // namespace oracle
