#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/polarization.hpp"

namespace secpolar {

/// Thrown when a state admits no secrecy: |B| >= |I|, so no B' split exists.
struct zero_capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Threshold configuration: delta_N = 2^(-N^beta) for beta in (0, 1/2).
struct PartitionConfig {
    std::size_t n = 0;
    double beta = 0.0;
    double delta = 0.0;

    static PartitionConfig from_beta(std::size_t n, double beta) {
        if (!(beta > 0.0 && beta < 0.5))
            throw std::invalid_argument("beta must lie in (0, 1/2), got " + std::to_string(beta));
        log2_exact(n);
        PartitionConfig cfg;
        cfg.n = n;
        cfg.beta = beta;
        cfg.delta = std::exp2(-std::pow(static_cast<double>(n), beta));
        return cfg;
    }

    // explicit threshold, for construction experiments outside the 2^(-N^beta) family
    static PartitionConfig with_delta(std::size_t n, double delta) {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("delta must lie in (0,1)");
        PartitionConfig cfg;
        cfg.n = n;
        cfg.beta = 0.0;
        cfg.delta = delta;
        return cfg;
    }
};

/// Index sets of one CSI realization.
///
///   I = L_main & H_wire   secure and reliable (message carrier)
///   F = ~L_main & H_wire  secure but unreliable
///   R = L_main & ~H_wire  reliable but insecure (random filler)
///   B = ~L_main & ~H_wire neither
///
/// L sets collect z <= delta, H sets z >= 1-delta. A wiretap index between
/// the thresholds counts as NOT in H_wire, so it lands in R or B rather
/// than being treated as secure.
struct Partition {
    std::size_t n = 0;
    IndexSet L_main, H_main;
    IndexSet L_wire, H_wire;
    IndexSet I, F, R, B;
    std::string state_tag;

    IndexSet unreliable() const { return complement(L_main, n); } // (L_main)^c = F u B
};

inline Partition partition_block(const ReliabilityProfile& z_main, const ReliabilityProfile& z_wire,
                                 const PartitionConfig& cfg, std::string state_tag = {}) {
    if (z_main.size() != cfg.n || z_wire.size() != cfg.n)
        throw std::invalid_argument("partition_block: profile length does not match config N");
    Partition p;
    p.n = cfg.n;
    p.state_tag = std::move(state_tag);
    const double lo = cfg.delta;
    const double hi = 1.0 - cfg.delta;
    for (std::uint32_t i = 0; i < cfg.n; ++i) {
        const bool lm = z_main.z[i] <= lo;
        const bool hw = z_wire.z[i] >= hi;
        if (lm) p.L_main.push_back(i);
        if (z_main.z[i] >= hi) p.H_main.push_back(i);
        if (z_wire.z[i] <= lo) p.L_wire.push_back(i);
        if (hw) p.H_wire.push_back(i);
        if (lm && hw) p.I.push_back(i);
        else if (!lm && hw) p.F.push_back(i);
        else if (lm && !hw) p.R.push_back(i);
        else p.B.push_back(i);
    }
    return p;
}

/// Partition with the I-split of the strong scheme. B_prime is carved out
/// of I to stand in for B in the next block's chained frozen positions;
/// B_add records the stabilizer indices when stabilize_b produced this.
struct StrongPartition {
    Partition base;
    IndexSet I_prime, B_prime;
    IndexSet B_add;
};

/// Splits I into B' (the |B| lowest-z_main indices of I, ties broken by
/// ascending index) and I' = I \ B'. Both parties derive the identical
/// split from the shared delayed CSI, so the rule must be deterministic.
inline StrongPartition split_strong(const Partition& p, const ReliabilityProfile& z_main) {
    if (z_main.size() != p.n)
        throw std::invalid_argument("split_strong: profile length does not match partition");
    if (p.B.size() >= p.I.size() && !p.B.empty())
        throw zero_capacity_error("split_strong: |B| >= |I| (" + std::to_string(p.B.size()) + " >= " +
                                  std::to_string(p.I.size()) + "), secrecy capacity of this state is 0");
    StrongPartition sp;
    sp.base = p;
    IndexSet order = p.I;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (z_main.z[a] != z_main.z[b]) return z_main.z[a] < z_main.z[b];
        return a < b;
    });
    sp.B_prime.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.B.size()));
    std::sort(sp.B_prime.begin(), sp.B_prime.end());
    sp.I_prime = set_difference(p.I, sp.B_prime);
    return sp;
}

/// Builds the stable-B construction: B_add is the ceil(r_add * N)
/// lowest-index members of the intersection of all R sets, moved out of
/// L_main so that every state's chained set becomes B~ = B u B_add. Each
/// returned partition is the adjusted one (R~ = R \ B_add, L~ = L \ B_add)
/// with the strong split applied against B~.
inline std::vector<StrongPartition> stabilize_b(const std::vector<Partition>& partitions,
                                                const ReliabilityProfile& z_main, double r_add) {
    if (partitions.empty()) throw std::invalid_argument("stabilize_b: no partitions");
    if (!(r_add >= 0.0 && r_add < 1.0)) throw std::invalid_argument("stabilize_b: r_add must lie in [0,1)");
    const std::size_t n = partitions.front().n;
    for (const auto& p : partitions)
        if (p.n != n) throw std::invalid_argument("stabilize_b: partitions of mixed length");

    IndexSet r_common = partitions.front().R;
    for (std::size_t k = 1; k < partitions.size(); ++k)
        r_common = set_intersection(r_common, partitions[k].R);

    const std::size_t n_add = static_cast<std::size_t>(std::ceil(r_add * static_cast<double>(n)));
    if (n_add > r_common.size())
        throw std::invalid_argument("stabilize_b: R-set intersection (" + std::to_string(r_common.size()) +
                                    ") too small for requested rate (needs " + std::to_string(n_add) + ")");
    IndexSet b_add(r_common.begin(), r_common.begin() + static_cast<std::ptrdiff_t>(n_add));

    std::vector<StrongPartition> out;
    out.reserve(partitions.size());
    for (const auto& p : partitions) {
        Partition adj = p;
        adj.B = set_union(p.B, b_add);
        adj.R = set_difference(p.R, b_add);
        adj.L_main = set_difference(p.L_main, b_add);
        StrongPartition sp = split_strong(adj, z_main);
        sp.B_add = b_add;
        out.push_back(std::move(sp));
    }
    return out;
}

} // namespace secpolar
