#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/channels.hpp"
#include "secpolar/codec.hpp"
#include "secpolar/partition.hpp"
#include "secpolar/polarization.hpp"
#include "secpolar/rng.hpp"

namespace secpolar {

enum class SchemeKind : std::uint8_t { Weak, Strong };

enum class MessageMode : std::uint8_t { Random, Zeros, Payload };

/// One-time pad: elementwise XOR, an involution.
inline Frame otp(const Frame& m, const Frame& k) {
    if (m.size() != k.size())
        throw std::invalid_argument("otp: message/key length mismatch (" + std::to_string(m.size()) +
                                    " vs " + std::to_string(k.size()) + ")");
    Frame out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ^ k[i];
    return out;
}

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Weak;
    std::size_t n = 0;   // block length N, power of two
    std::uint32_t T = 1; // blocks 0..T
    double beta = 0.25;
    UncertaintySet uncertainty; // main channel plus the scalar state set S
    StateKind state_kind = StateKind::Block;
    WiretapMenu menu; // block-varying menu (derived from the set, possibly extended)
    AdversaryPolicy policy;
    double r_add = 0.0; // stable-B stabilizer rate (strong, block menu only)
    std::uint64_t seed = 0;
    MessageMode message_mode = MessageMode::Random;
    std::vector<Bit> payload; // MessageMode::Payload bit stream

    void validate() const {
        log2_exact(n);
        if (T < 1) throw std::invalid_argument("T must be >= 1");
        if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0, 1/2)");
        uncertainty.validate();
        if (state_kind == StateKind::Block && menu.size() == 0)
            throw std::invalid_argument("block-varying run needs a non-empty wiretap menu");
        if (r_add > 0.0 && state_kind != StateKind::Block)
            throw std::invalid_argument("stable-B construction requires the block-varying menu");
        if (!(r_add >= 0.0 && r_add < 1.0)) throw std::invalid_argument("r_add out of [0,1)");
    }
};

// seed stream tags
namespace seedtag {
constexpr std::uint64_t kStateSeq = 1;
constexpr std::uint64_t kMainNoise = 2;
constexpr std::uint64_t kWireNoise = 3;
constexpr std::uint64_t kAlice = 4;
constexpr std::uint64_t kMessage = 5;
constexpr std::uint64_t kPreshared = 6;
constexpr std::uint64_t kBobFill = 7;
constexpr std::uint64_t kEveFill = 8;
} // namespace seedtag

/// Everything both parties can derive before any block is sent: the main
/// channel profile and, for a block-varying menu, the per-state partitions
/// (stabilized when r_add > 0). Shareable across Monte Carlo trials.
struct Construction {
    PartitionConfig pcfg;
    ErasureProfile main_profile;
    ReliabilityProfile z_main;
    IndexSet L_tilde;        // reliable set actually used by the scheme
    IndexSet frozen_global;  // complement of L_tilde
    // per-menu-state (block-varying only)
    std::vector<ReliabilityProfile> wire_z;
    std::vector<StrongPartition> per_state;
};

inline Construction make_construction(const SchemeConfig& cfg) {
    cfg.validate();
    Construction c;
    c.pcfg = PartitionConfig::from_beta(cfg.n, cfg.beta);
    c.main_profile = ErasureProfile::stationary(cfg.n, cfg.uncertainty.main_eps);
    c.z_main = evolve_bec(c.main_profile);

    if (cfg.state_kind == StateKind::Block) {
        std::vector<Partition> parts;
        for (std::size_t s = 0; s < cfg.menu.size(); ++s) {
            c.wire_z.push_back(evolve_bec(cfg.menu.profiles[s]));
            parts.push_back(partition_block(c.z_main, c.wire_z.back(), c.pcfg, cfg.menu.tags[s]));
        }
        if (cfg.kind == SchemeKind::Strong) {
            c.per_state = stabilize_b(parts, c.z_main, cfg.r_add);
        } else {
            for (auto& p : parts) c.per_state.push_back(StrongPartition{std::move(p), {}, {}, {}});
        }
        c.L_tilde = c.per_state.front().base.L_main; // identical across states by construction
    } else {
        // arbitrarily varying: partitions exist only per realized block
        IndexSet lm;
        for (std::uint32_t i = 0; i < cfg.n; ++i)
            if (c.z_main.z[i] <= c.pcfg.delta) lm.push_back(i);
        c.L_tilde = std::move(lm);
    }
    c.frozen_global = complement(c.L_tilde, cfg.n);
    return c;
}

/// One party's inter-block carry: the key stream identified from I (weak)
/// or I' (strong) of the block that just completed, and for the strong
/// scheme the bits destined for the next block's (L~)^c positions plus the
/// block-0 pre-shared frozen values.
struct ChainState {
    std::uint32_t t = 0; // block the carried material came from
    Frame key_stream;
    IndexSet key_positions;
    Frame carry_bits; // F-sourced first (ascending), then B'-sourced
    Frame preshared;
};

/// Record of one block of a chained run.
struct BlockTranscript {
    std::uint32_t t = 0;
    WiretapState state;
    StrongPartition part;   // weak runs fill only .base
    ReliabilityProfile wire_z;
    Frame u, x;
    ReceivedWord y, z;      // Bob's and Eve's words
    Frame bob_u;
    std::vector<std::uint32_t> bob_guessed;
    IndexSet msg_set;       // positions that carried E_t (empty at block 0)
    Frame msg, cipher, m_hat;
    IndexSet key_set;       // I_t (weak) or I'_t (strong)
    IndexSet carry_targets; // strong: (L~)^c, ascending
    Frame alice_carry, bob_carry; // strong: values handed to block t+1
    Frame eve_u, eve_m_hat; // filled by eve_attack
    std::vector<std::uint32_t> eve_guessed;
};

struct RunResult {
    SchemeKind kind = SchemeKind::Weak;
    std::size_t n = 0;
    std::uint32_t T = 0;
    std::vector<BlockTranscript> blocks;
    DelayedCsi csi;
    ReliabilityProfile z_main;
    IndexSet frozen_global;
};

namespace detail {

class MessageSource {
public:
    MessageSource(const SchemeConfig& cfg, std::uint64_t seed_base) : cfg_(cfg), seed_base_(seed_base) {}

    Frame take(std::uint32_t t, std::size_t len) {
        Frame m(len, 0);
        switch (cfg_.message_mode) {
        case MessageMode::Zeros:
            break;
        case MessageMode::Random: {
            Rng rng(derive_seed(seed_base_, {seedtag::kMessage, t}));
            for (auto& b : m) b = rng.bit();
            break;
        }
        case MessageMode::Payload:
            for (auto& b : m) {
                b = offset_ < cfg_.payload.size() ? cfg_.payload[offset_] : Bit{0};
                ++offset_;
            }
            break;
        }
        return m;
    }

private:
    const SchemeConfig& cfg_;
    std::uint64_t seed_base_;
    std::size_t offset_ = 0;
};

// partition (with strong split) of the block that just completed
inline StrongPartition realized_partition(const SchemeConfig& cfg, const Construction& c,
                                          const WiretapState& st, ReliabilityProfile& wire_z_out) {
    if (cfg.state_kind == StateKind::Block) {
        wire_z_out = c.wire_z[st.block_state];
        return c.per_state[st.block_state];
    }
    const ErasureProfile prof = realized_profile(st, cfg.menu, cfg.uncertainty.states);
    wire_z_out = evolve_bec(prof);
    Partition p = partition_block(c.z_main, wire_z_out, c.pcfg, st.tag());
    if (cfg.kind == SchemeKind::Strong) return split_strong(p, c.z_main);
    return StrongPartition{std::move(p), {}, {}, {}};
}

} // namespace detail

/// Executes the OTP-chain scheme over blocks 0..T. Block 0 carries fresh
/// random bits on L_main and public zeros elsewhere; block t >= 1 carries
/// the ciphertext E_t = M_t ^ u^{I_{t-1}}_{t-1} on I_{t-1}, fresh random
/// bits on R_{t-1} and public zeros on (L_main)^c. Partitions are fetched
/// through the delayed-CSI capability only after each block completes.
inline RunResult weak_run(const SchemeConfig& cfg, const Construction& c) {
    if (cfg.kind != SchemeKind::Weak) throw std::invalid_argument("weak_run: config kind is not WEAK");
    cfg.validate();

    const std::size_t n_states =
        cfg.state_kind == StateKind::Block ? cfg.menu.size() : cfg.uncertainty.states.size();
    const FrozenMap public_frozen = FrozenMap::zeros(c.frozen_global);

    RunResult run;
    run.kind = SchemeKind::Weak;
    run.n = cfg.n;
    run.T = cfg.T;
    run.z_main = c.z_main;
    run.frozen_global = c.frozen_global;

    detail::MessageSource msgsrc(cfg, cfg.seed);
    ChainState alice, bob;

    for (std::uint32_t t = 0; t <= cfg.T; ++t) {
        BlockTranscript b;
        b.t = t;
        b.state = sample_state(cfg.policy, n_states, t, cfg.state_kind, cfg.n);
        run.csi.record(t, b.state);

        Frame u(cfg.n, 0);
        Rng pad(derive_seed(cfg.seed, {seedtag::kAlice, t}));
        if (t == 0) {
            for (std::uint32_t i : c.L_tilde) u[i] = pad.bit();
        } else {
            b.msg_set = alice.key_positions;
            b.msg = msgsrc.take(t, b.msg_set.size());
            b.cipher = otp(b.msg, alice.key_stream);
            scatter(u, b.msg_set, b.cipher);
            for (std::uint32_t i : set_difference(c.L_tilde, b.msg_set)) u[i] = pad.bit();
        }
        b.u = u;
        b.x = encode(u);

        const ErasureProfile wire_prof = realized_profile(b.state, cfg.menu, cfg.uncertainty.states);
        b.y = transmit(b.x, c.main_profile, derive_seed(cfg.seed, {seedtag::kMainNoise, t}));
        b.z = transmit(b.x, wire_prof, derive_seed(cfg.seed, {seedtag::kWireNoise, t}));

        ScResult dec = sc_decode_traced(b.y, public_frozen, derive_seed(cfg.seed, {seedtag::kBobFill, t}));
        b.bob_u = std::move(dec.u);
        b.bob_guessed = std::move(dec.guessed);

        if (t > 0) b.m_hat = otp(gather(b.bob_u, b.msg_set), bob.key_stream);

        // block done; delayed CSI yields this block's partition and key stream
        run.csi.mark_complete(t);
        const WiretapState& revealed = run.csi.reveal(t);
        b.part = detail::realized_partition(cfg, c, revealed, b.wire_z);
        b.key_set = b.part.base.I;
        alice.t = bob.t = t;
        alice.key_positions = bob.key_positions = b.key_set;
        alice.key_stream = gather(b.u, b.key_set);
        bob.key_stream = gather(b.bob_u, b.key_set);

        run.blocks.push_back(std::move(b));
    }
    return run;
}

/// Executes the strong scheme over blocks 0..T. Block 0 uses pre-shared
/// secret frozen bits on (L~)^c and fresh random bits on L~. Afterwards
/// each revealed partition yields the key stream u^{I'_t} and the carried
/// bits u^{F_t}, u^{B'_t}; block t+1 plants those carried bits on (L~)^c
/// (F-sourced first, ascending, then B'-sourced, onto ascending targets),
/// and Bob decodes (L~)^c from his carried copies instead of the channel.
inline RunResult strong_run(const SchemeConfig& cfg, const Construction& c) {
    if (cfg.kind != SchemeKind::Strong) throw std::invalid_argument("strong_run: config kind is not STRONG");
    cfg.validate();

    const std::size_t n_states =
        cfg.state_kind == StateKind::Block ? cfg.menu.size() : cfg.uncertainty.states.size();
    const IndexSet& carry_targets = c.frozen_global;

    RunResult run;
    run.kind = SchemeKind::Strong;
    run.n = cfg.n;
    run.T = cfg.T;
    run.z_main = c.z_main;
    run.frozen_global = c.frozen_global;

    detail::MessageSource msgsrc(cfg, cfg.seed);

    ChainState alice, bob;
    {
        Rng rng(derive_seed(cfg.seed, {seedtag::kPreshared}));
        alice.preshared.resize(carry_targets.size());
        for (auto& bit : alice.preshared) bit = rng.bit();
        bob.preshared = alice.preshared; // shared secret, unknown to Eve
    }
    alice.carry_bits = alice.preshared;
    bob.carry_bits = bob.preshared;

    for (std::uint32_t t = 0; t <= cfg.T; ++t) {
        BlockTranscript b;
        b.t = t;
        b.state = sample_state(cfg.policy, n_states, t, cfg.state_kind, cfg.n);
        run.csi.record(t, b.state);
        b.carry_targets = carry_targets;

        Frame u(cfg.n, 0);
        scatter(u, carry_targets, alice.carry_bits);
        Rng pad(derive_seed(cfg.seed, {seedtag::kAlice, t}));
        if (t == 0) {
            for (std::uint32_t i : c.L_tilde) u[i] = pad.bit();
        } else {
            b.msg_set = alice.key_positions;
            b.msg = msgsrc.take(t, b.msg_set.size());
            b.cipher = otp(b.msg, alice.key_stream);
            scatter(u, b.msg_set, b.cipher);
            for (std::uint32_t i : set_difference(c.L_tilde, b.msg_set)) u[i] = pad.bit();
        }
        b.u = u;
        b.x = encode(u);

        const ErasureProfile wire_prof = realized_profile(b.state, cfg.menu, cfg.uncertainty.states);
        b.y = transmit(b.x, c.main_profile, derive_seed(cfg.seed, {seedtag::kMainNoise, t}));
        b.z = transmit(b.x, wire_prof, derive_seed(cfg.seed, {seedtag::kWireNoise, t}));

        // Bob's frozen map is his carried copy of (L~)^c, not channel evidence
        const FrozenMap bob_frozen(carry_targets, bob.carry_bits);
        ScResult dec = sc_decode_traced(b.y, bob_frozen, derive_seed(cfg.seed, {seedtag::kBobFill, t}));
        b.bob_u = std::move(dec.u);
        b.bob_guessed = std::move(dec.guessed);

        if (t > 0) b.m_hat = otp(gather(b.bob_u, b.msg_set), bob.key_stream);

        run.csi.mark_complete(t);
        const WiretapState& revealed = run.csi.reveal(t);
        b.part = detail::realized_partition(cfg, c, revealed, b.wire_z);

        const IndexSet& f_set = b.part.base.F;
        const IndexSet& bp_set = b.part.B_prime;
        if (f_set.size() + bp_set.size() != carry_targets.size())
            throw std::logic_error("strong_run: |F_t| + |B'_t| != |(L~)^c| at block " + std::to_string(t));

        b.key_set = b.part.I_prime;
        alice.t = bob.t = t;
        alice.key_positions = bob.key_positions = b.key_set;
        alice.key_stream = gather(b.u, b.key_set);
        bob.key_stream = gather(b.bob_u, b.key_set);

        // next block's (L~)^c bits: F-sourced first, then B'-sourced, each ascending
        alice.carry_bits = gather(b.u, f_set);
        bob.carry_bits = gather(b.bob_u, f_set);
        const Frame a_bp = gather(b.u, bp_set);
        const Frame b_bp = gather(b.bob_u, bp_set);
        alice.carry_bits.insert(alice.carry_bits.end(), a_bp.begin(), a_bp.end());
        bob.carry_bits.insert(bob.carry_bits.end(), b_bp.begin(), b_bp.end());
        b.alice_carry = alice.carry_bits;
        b.bob_carry = bob.carry_bits;

        run.blocks.push_back(std::move(b));
    }
    return run;
}

inline RunResult scheme_run(const SchemeConfig& cfg, const Construction& c) {
    return cfg.kind == SchemeKind::Weak ? weak_run(cfg, c) : strong_run(cfg, c);
}

/// Genie-aided attack: per block Eve SC-decodes her own word knowing the
/// construction, every partition and every value that is public to her
/// (the all-zero frozen bits of the weak scheme; for the strong scheme she
/// only has her own previous-block estimates of the carried bits).
/// Unresolved positions get seeded coin flips. Fills the transcripts' eve
/// fields and returns her per-block BER against the true messages.
inline std::vector<double> eve_attack(RunResult& run, std::uint64_t seed) {
    std::vector<double> ber;
    Frame eve_prev; // her previous block's full decode
    Frame eve_carry;
    for (auto& b : run.blocks) {
        FrozenMap eve_frozen;
        if (run.kind == SchemeKind::Weak) {
            eve_frozen = FrozenMap::zeros(run.frozen_global);
        } else if (b.t > 0) {
            eve_frozen = FrozenMap(b.carry_targets, eve_carry); // her own estimates
        }
        ScResult dec = sc_decode_traced(b.z, eve_frozen, derive_seed(seed, {seedtag::kEveFill, b.t}));
        b.eve_u = std::move(dec.u);
        b.eve_guessed = std::move(dec.guessed);

        if (b.t > 0 && !b.msg_set.empty()) {
            b.eve_m_hat = otp(gather(b.eve_u, b.msg_set), gather(eve_prev, b.msg_set));
            std::size_t errs = 0;
            for (std::size_t i = 0; i < b.msg.size(); ++i) errs += b.eve_m_hat[i] != b.msg[i];
            ber.push_back(static_cast<double>(errs) / static_cast<double>(b.msg.size()));
        } else if (b.t > 0) {
            ber.push_back(std::numeric_limits<double>::quiet_NaN()); // block carried no message
        }

        if (run.kind == SchemeKind::Strong) {
            eve_carry = gather(b.eve_u, b.part.base.F);
            const Frame e_bp = gather(b.eve_u, b.part.B_prime);
            eve_carry.insert(eve_carry.end(), e_bp.begin(), e_bp.end());
        }
        eve_prev = b.eve_u;
    }
    return ber;
}

} // namespace secpolar
