#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/bits.hpp"

namespace secpolar {

/// Per-use erasure probabilities of one N-length BEC block. A stationary
/// block has all entries equal; an arbitrarily-varying block does not.
struct ErasureProfile {
    std::vector<double> eps;

    ErasureProfile() = default;

    explicit ErasureProfile(std::vector<double> e) : eps(std::move(e)) { validate(); }

    static ErasureProfile stationary(std::size_t n, double e) {
        return ErasureProfile(std::vector<double>(n, e));
    }

    std::size_t size() const { return eps.size(); }

    double mean() const {
        return std::accumulate(eps.begin(), eps.end(), 0.0) / static_cast<double>(eps.size());
    }

    void validate() const {
        log2_exact(eps.size());
        for (double e : eps)
            if (!(e >= 0.0 && e <= 1.0))
                throw std::invalid_argument("erasure probability out of [0,1]: " + std::to_string(e));
    }
};

/// Bhattacharyya parameters Z(U^i | U^{1:i-1}, outputs) of the N synthetic
/// channels, in natural polar index order: index 0 is the channel built
/// entirely from minus (degrading) transforms.
struct ReliabilityProfile {
    std::vector<double> z;

    std::size_t size() const { return z.size(); }

    double mean() const {
        return std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
    }
};

namespace detail {

inline std::uint32_t bit_reverse(std::uint32_t v, unsigned nbits) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < nbits; ++b) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

} // namespace detail

/// Exact Z-parameter evolution for an N-length BEC block under the
/// generator R F^{xn}. One pairing of erasure values (a, b) yields
/// Z = a + b - a*b on the minus output and Z = a*b on the plus output;
/// the butterfly applies this log2(N) times. Heterogeneous entries follow
/// the same pairing the encoder induces, so entry i of the result equals
/// Z(U^i | U^{1:i-1}, outputs) exactly (synthetic channels of BECs are
/// again BECs). Values are clamped to [0,1] against rounding.
inline ReliabilityProfile evolve_bec(const ErasureProfile& profile) {
    profile.validate();
    const std::size_t n = profile.size();
    const unsigned levels = log2_exact(n);

    // x R F^{xn} = (x del br) F^{xn}: evolving the bit-reversed profile with
    // the plain F^{xn} butterfly gives the natural-order Z profile.
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = profile.eps[detail::bit_reverse(static_cast<std::uint32_t>(i), levels)];

    for (std::size_t h = n / 2; h >= 1; h /= 2) {
        for (std::size_t blk = 0; blk < n; blk += 2 * h) {
            for (std::size_t i = blk; i < blk + h; ++i) {
                const double a = z[i];
                const double b = z[i + h];
                double minus = a + b - a * b;
                double plus = a * b;
                if (minus > 1.0) minus = 1.0;
                if (minus < 0.0) minus = 0.0;
                if (plus > 1.0) plus = 1.0;
                if (plus < 0.0) plus = 0.0;
                z[i] = minus;
                z[i + h] = plus;
            }
        }
        if (h == 1) break;
    }
    return ReliabilityProfile{std::move(z)};
}

} // namespace secpolar
