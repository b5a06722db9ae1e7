#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/polarization.hpp"
#include "secpolar/rng.hpp"

namespace secpolar {

/// The set S of potential wiretap channel states plus the fixed main
/// channel. For the block-varying sub-model the realized state picks one
/// whole-block profile; for the arbitrarily-varying sub-model each symbol
/// picks its own member of `states`.
struct UncertaintySet {
    double main_eps = 0.0;
    std::vector<double> states;

    void validate() const {
        if (states.empty()) throw std::invalid_argument("uncertainty set: states list is empty");
        if (!(main_eps >= 0.0 && main_eps <= 1.0))
            throw std::invalid_argument("uncertainty set: main_eps out of [0,1]");
        for (double s : states)
            if (!(s >= 0.0 && s <= 1.0))
                throw std::invalid_argument("uncertainty set: state eps out of [0,1]");
    }
};

enum class StateKind : std::uint8_t { Block, Arbitrary };

/// One realized CSI value s (block varying) or s^{1:N} (arbitrarily varying).
struct WiretapState {
    StateKind kind = StateKind::Block;
    std::uint32_t block_state = 0;           // index into the block menu
    std::vector<std::uint32_t> symbol_states; // per-symbol indices into the scalar set

    std::string tag() const {
        if (kind == StateKind::Block) return "s" + std::to_string(block_state);
        return "s^{1:N}#" + std::to_string(symbol_states.size());
    }
};

/// Menu of wiretap block profiles the adversary chooses from. For plain
/// block varying these are the stationary profiles of the scalar states;
/// experiment setups may add non-stationary entries.
struct WiretapMenu {
    std::vector<ErasureProfile> profiles;
    std::vector<std::string> tags;

    std::size_t size() const { return profiles.size(); }

    static WiretapMenu from_states(const std::vector<double>& states, std::size_t n) {
        WiretapMenu m;
        for (std::size_t k = 0; k < states.size(); ++k) {
            char tag[32];
            std::snprintf(tag, sizeof tag, "eps%g", states[k]);
            m.profiles.push_back(ErasureProfile::stationary(n, states[k]));
            m.tags.push_back(tag);
        }
        return m;
    }
};

inline ErasureProfile realized_profile(const WiretapState& st, const WiretapMenu& menu,
                                       const std::vector<double>& scalar_states) {
    if (st.kind == StateKind::Block) {
        if (st.block_state >= menu.size()) throw std::invalid_argument("state index outside menu");
        return menu.profiles[st.block_state];
    }
    std::vector<double> eps(st.symbol_states.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (st.symbol_states[i] >= scalar_states.size())
            throw std::invalid_argument("symbol state index outside uncertainty set");
        eps[i] = scalar_states[st.symbol_states[i]];
    }
    return ErasureProfile(eps);
}

enum class PolicyKind : std::uint8_t { UniformIid, FixedSequence, WorstCaseSweep };

/// How the eavesdropper picks states. FixedSequence and WorstCaseSweep
/// exist so the max-over-realizations criteria can be exercised
/// mechanically instead of only sampling the uniform adversary.
struct AdversaryPolicy {
    PolicyKind kind = PolicyKind::UniformIid;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> sequence; // FixedSequence: length T+1 (block) or (T+1)*N (arbitrary)
    std::uint32_t sweep_state = 0;       // WorstCaseSweep: the state this run holds constant
};

/// State for block t. UniformIid draws per block (Block) or per symbol
/// (Arbitrary) from a stream seeded independently of N and beta, so sweeps
/// at different sizes see the same block-state sequence.
inline WiretapState sample_state(const AdversaryPolicy& policy, std::size_t n_states, std::uint32_t t,
                                 StateKind kind, std::size_t block_len) {
    if (n_states == 0) throw std::invalid_argument("sample_state: empty state set");
    WiretapState st;
    st.kind = kind;
    switch (policy.kind) {
    case PolicyKind::UniformIid: {
        if (kind == StateKind::Block) {
            Rng rng(derive_seed(policy.seed, {0x5741u, t}));
            st.block_state = static_cast<std::uint32_t>(rng.below(n_states));
        } else {
            Rng rng(derive_seed(policy.seed, {0x5742u, t}));
            st.symbol_states.resize(block_len);
            for (auto& s : st.symbol_states) s = static_cast<std::uint32_t>(rng.below(n_states));
        }
        break;
    }
    case PolicyKind::FixedSequence: {
        if (kind == StateKind::Block) {
            if (t >= policy.sequence.size())
                throw std::out_of_range("adversary sequence exhausted at block " + std::to_string(t));
            st.block_state = policy.sequence[t];
        } else {
            const std::size_t base = static_cast<std::size_t>(t) * block_len;
            if (base + block_len > policy.sequence.size())
                throw std::out_of_range("adversary sequence exhausted at block " + std::to_string(t));
            st.symbol_states.assign(policy.sequence.begin() + static_cast<std::ptrdiff_t>(base),
                                    policy.sequence.begin() + static_cast<std::ptrdiff_t>(base + block_len));
        }
        break;
    }
    case PolicyKind::WorstCaseSweep: {
        // constant-state runs; per-block-additive criteria attain their
        // maximum over realizations on one of these
        if (policy.sweep_state >= n_states) throw std::invalid_argument("sweep state outside set");
        if (kind == StateKind::Block) {
            st.block_state = policy.sweep_state;
        } else {
            st.symbol_states.assign(block_len, policy.sweep_state);
        }
        break;
    }
    }
    return st;
}

/// BEC transmission: symbol i is erased independently with probability
/// eps[i], otherwise passed unchanged.
inline ReceivedWord transmit(const Frame& x, const ErasureProfile& eps_profile, std::uint64_t rng_seed) {
    if (x.size() != eps_profile.size())
        throw std::invalid_argument("transmit: frame/profile length mismatch");
    ReceivedWord y(x.size());
    Rng rng(rng_seed);
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = rng.bernoulli(eps_profile.eps[i]) ? Symbol::Erased
                                                 : static_cast<Symbol>(x[i]);
    return y;
}

struct delay_violation : std::logic_error {
    using std::logic_error::logic_error;
};

/// The delayed-CSI disclosure capability. States become visible only once
/// their block is marked complete; every reveal attempt is logged, so a
/// run transcript can be audited for causality violations instead of
/// trusting the scheme code.
class DelayedCsi {
public:
    struct Access {
        std::uint32_t block = 0;
        bool premature = false;
    };

    void record(std::uint32_t t, WiretapState state) {
        if (t != states_.size())
            throw std::logic_error("DelayedCsi: blocks must be recorded in order");
        states_.push_back(std::move(state));
        completed_.push_back(false);
    }

    void mark_complete(std::uint32_t t) {
        if (t >= states_.size()) throw std::logic_error("DelayedCsi: unknown block");
        completed_[t] = true;
    }

    /// The realized state of block t, legal only after mark_complete(t).
    const WiretapState& reveal(std::uint32_t t) {
        const bool premature = t >= completed_.size() || !completed_[t];
        log_.push_back(Access{t, premature});
        if (premature)
            throw delay_violation("reveal_csi before block " + std::to_string(t) + " completed");
        return states_[t];
    }

    const std::vector<Access>& access_log() const { return log_; }

    std::size_t premature_accesses() const {
        std::size_t k = 0;
        for (const auto& a : log_) k += a.premature;
        return k;
    }

private:
    std::vector<WiretapState> states_;
    std::vector<bool> completed_;
    std::vector<Access> log_;
};

} // namespace secpolar
