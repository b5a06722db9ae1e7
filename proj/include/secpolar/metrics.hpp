#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "secpolar/partition.hpp"
#include "secpolar/schemes.hpp"

namespace secpolar {

/// Binary entropy in bits, with h(0) = h(1) = 0.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p out of [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Theoretical bound bundle for one (scheme, N, beta, T) point.
struct BoundReport {
    std::size_t n = 0;
    std::uint32_t T = 0;
    double beta = 0.0;
    double pe_upper = 0.0;           // multi-block decoding error bound
    double leakage_upper = 0.0;      // multi-block leakage bound (bits)
    double leakage_rate_upper = 0.0; // leakage_upper / (N (T+1))
    double secrecy_rate = 0.0;
};

/// Multi-block decoding-error bound. Weak chain: the key stream of blocks
/// 0..T-1 and the ciphertext of blocks 1..T are both decoded on I sets, so
///
///   Pe <= sum_{t=1..T} sum_{i in I_{t-1}} Z_main[i] + sum_{t=0..T-1} sum_{i in I_t} Z_main[i].
///
/// The strong chain decodes I' sets instead and additionally the carried
/// B'_t bits of blocks 0..T-1.
inline double pe_bound(const std::vector<StrongPartition>& per_block, const ReliabilityProfile& z_main,
                       SchemeKind kind) {
    if (per_block.empty()) return 0.0;
    const std::size_t T = per_block.size() - 1;
    auto sum_over = [&](const IndexSet& s) {
        double acc = 0.0;
        for (std::uint32_t i : s) acc += z_main.z[i];
        return acc;
    };
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const auto& p = per_block[t];
        const IndexSet& info = kind == SchemeKind::Weak ? p.base.I : p.I_prime;
        total += 2.0 * sum_over(info); // once as key stream, once as next block's ciphertext carrier
        if (kind == SchemeKind::Strong) total += sum_over(p.B_prime);
    }
    return total;
}

/// Per-block weak-security leakage bound |B| + H(delta) + |R| delta; the
/// mutual-information gap of the proof chain is bounded through |B|.
inline double leakage_bound_weak(const Partition& p, double delta) {
    return static_cast<double>(p.B.size()) + binary_entropy(delta) +
           static_cast<double>(p.R.size()) * delta;
}

/// Weak-chain key-stream leakage over blocks 0..T-1.
inline double leakage_bound_weak_total(const std::vector<StrongPartition>& per_block, double delta) {
    if (per_block.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < per_block.size(); ++t)
        total += leakage_bound_weak(per_block[t].base, delta);
    return total;
}

/// Strong-chain leakage bound: sum over blocks of
/// sum_{i in I' u B' u F} (1 - Z_wire[i]^2), the computable form of the
/// per-block term via Z(X|Y)^2 <= H(X|Y). Every counted index must lie in
/// H_wire of its block's realized state; a violation means the chained
/// construction is broken.
inline double leakage_bound_strong(const std::vector<StrongPartition>& per_block,
                                   const std::vector<ReliabilityProfile>& z_wire_per_block) {
    if (per_block.size() != z_wire_per_block.size())
        throw std::invalid_argument("leakage_bound_strong: one wiretap profile per block required");
    double total = 0.0;
    for (std::size_t t = 0; t < per_block.size(); ++t) {
        const auto& p = per_block[t];
        const auto& zw = z_wire_per_block[t];
        const IndexSet counted = set_union(set_union(p.I_prime, p.B_prime), p.base.F);
        if (!is_subset(counted, p.base.H_wire))
            throw std::logic_error("leakage_bound_strong: I' u B' u F escapes H_wire at block " +
                                   std::to_string(t));
        for (std::uint32_t i : counted) total += 1.0 - zw.z[i] * zw.z[i];
    }
    return total;
}

/// Secrecy rate of the chain: message bits ride on I_{t-1} (weak) or
/// I'_{t-1} (strong) for t = 1..T, normalized by N(T+1).
inline double secrecy_rate(const std::vector<StrongPartition>& per_block, SchemeKind kind, std::size_t n,
                           std::uint32_t T) {
    if (per_block.size() < static_cast<std::size_t>(T) + 1)
        throw std::invalid_argument("secrecy_rate: need partitions for blocks 0..T");
    double bits = 0.0;
    for (std::uint32_t t = 1; t <= T; ++t) {
        const auto& p = per_block[t - 1];
        bits += static_cast<double>(kind == SchemeKind::Weak ? p.base.I.size() : p.I_prime.size());
    }
    return bits / (static_cast<double>(n) * (static_cast<double>(T) + 1.0));
}

/// All four bound calculators over one run's partition sequence.
inline BoundReport bound_report(const std::vector<StrongPartition>& per_block,
                                const ReliabilityProfile& z_main,
                                const std::vector<ReliabilityProfile>& z_wire_per_block,
                                SchemeKind kind, double delta, std::size_t n, std::uint32_t T,
                                double beta) {
    BoundReport r;
    r.n = n;
    r.T = T;
    r.beta = beta;
    r.pe_upper = pe_bound(per_block, z_main, kind);
    r.leakage_upper = kind == SchemeKind::Weak
                          ? leakage_bound_weak_total(per_block, delta)
                          : leakage_bound_strong(per_block, z_wire_per_block);
    r.leakage_rate_upper = r.leakage_upper / (static_cast<double>(n) * (static_cast<double>(T) + 1.0));
    r.secrecy_rate = secrecy_rate(per_block, kind, n, T);
    return r;
}

enum class Party : std::uint8_t { Bob, Eve };

struct BerReport {
    std::vector<double> per_block; // blocks 1..T, NaN where no message was carried
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;

    double pooled() const {
        return bits == 0 ? std::numeric_limits<double>::quiet_NaN()
                         : static_cast<double>(errors) / static_cast<double>(bits);
    }
};

/// Hamming error fraction of the decoded message against the true one,
/// per block and pooled. Eve's fields must have been filled by eve_attack.
inline BerReport experimental_ber(const RunResult& run, Party party) {
    BerReport rep;
    for (const auto& b : run.blocks) {
        if (b.t == 0) continue;
        const Frame& est = party == Party::Bob ? b.m_hat : b.eve_m_hat;
        if (b.msg.empty()) {
            rep.per_block.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        if (est.size() != b.msg.size())
            throw std::invalid_argument("experimental_ber: decode missing (run eve_attack first?)");
        std::uint64_t errs = 0;
        for (std::size_t i = 0; i < b.msg.size(); ++i) errs += est[i] != b.msg[i];
        rep.per_block.push_back(static_cast<double>(errs) / static_cast<double>(b.msg.size()));
        rep.errors += errs;
        rep.bits += b.msg.size();
    }
    return rep;
}

/// Rate comparison of chaining a whole (L_main)^c worth of carried bits
/// (the naive route, rate C_s - R_F) against carrying only |B| of them.
struct RateSacrifice {
    double naive_rate = 0.0;    // (|I| - |(L_main)^c|) / N, the C_s - R_F route
    double modified_rate = 0.0; // |I'| / N = (|I| - |B|) / N
    double frozen_rate = 0.0;   // R_F = |F| / N
    double cs_finite = 0.0;     // (|I| - |B|) / N, finite-length stand-in for C_s
};

inline RateSacrifice rate_sacrifice(const Partition& p) {
    const double n = static_cast<double>(p.n);
    RateSacrifice r;
    const double unreliable = static_cast<double>(p.F.size() + p.B.size());
    r.naive_rate = (static_cast<double>(p.I.size()) - unreliable) / n;
    r.modified_rate = (static_cast<double>(p.I.size()) - static_cast<double>(p.B.size())) / n;
    r.frozen_rate = static_cast<double>(p.F.size()) / n;
    r.cs_finite = r.modified_rate;
    return r;
}

// partition sequence of a finished run, for feeding the bound calculators
inline std::vector<StrongPartition> partitions_of(const RunResult& run) {
    std::vector<StrongPartition> out;
    out.reserve(run.blocks.size());
    for (const auto& b : run.blocks) out.push_back(b.part);
    return out;
}

inline std::vector<ReliabilityProfile> wire_profiles_of(const RunResult& run) {
    std::vector<ReliabilityProfile> out;
    out.reserve(run.blocks.size());
    for (const auto& b : run.blocks) out.push_back(b.wire_z);
    return out;
}

} // namespace secpolar
