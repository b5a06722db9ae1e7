#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "secpolar/experiment.hpp"
#include "secpolar/metrics.hpp"
#include "secpolar/schemes.hpp"

using namespace secpolar;

namespace {

SchemeConfig base_cfg(SchemeKind kind, std::size_t n, double main_eps, std::vector<double> states,
                      std::uint32_t T, std::uint64_t seed) {
    SchemeConfig cfg;
    cfg.kind = kind;
    cfg.n = n;
    cfg.T = T;
    cfg.beta = 0.25;
    cfg.uncertainty = UncertaintySet{main_eps, states};
    cfg.menu = WiretapMenu::from_states(states, n);
    cfg.policy.kind = PolicyKind::UniformIid;
    cfg.policy.seed = derive_seed(seed, {seedtag::kStateSeq});
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("otp basics") {
    CHECK(otp({1, 0, 1, 0}, {0, 0, 0, 0}) == Frame{1, 0, 1, 0});
    CHECK(otp({1, 0, 1, 0}, {1, 0, 1, 0}) == Frame{0, 0, 0, 0});
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        Frame m(32), k(32);
        for (auto& b : m) b = rng.bit();
        for (auto& b : k) b = rng.bit();
        CHECK(otp(otp(m, k), k) == m);
    }
    CHECK_THROWS_AS(otp({1, 0}, {1}), std::invalid_argument);
}

TEST_CASE("weak chain decrypts exactly over a noiseless main channel") {
    auto cfg = base_cfg(SchemeKind::Weak, 128, 0.0, {0.4, 0.5}, 4, 11);
    const auto c = make_construction(cfg);
    const auto run = weak_run(cfg, c);
    REQUIRE(run.blocks.size() == 5);
    for (const auto& b : run.blocks) {
        if (b.t == 0) continue;
        REQUIRE_FALSE(b.msg.empty());
        CHECK(b.m_hat == b.msg);
        CHECK(b.bob_guessed.empty());
    }
    CHECK(run.csi.premature_accesses() == 0);
}

TEST_CASE("strong chain decrypts exactly and carries match over a noiseless main channel") {
    auto cfg = base_cfg(SchemeKind::Strong, 128, 0.0, {0.4, 0.5}, 4, 12);
    const auto c = make_construction(cfg);
    const auto run = strong_run(cfg, c);
    for (const auto& b : run.blocks) {
        if (b.t > 0) CHECK(b.m_hat == b.msg);
        CHECK(b.alice_carry == b.bob_carry);
        CHECK(b.part.base.F.size() + b.part.B_prime.size() == run.frozen_global.size());
    }
    CHECK(run.csi.premature_accesses() == 0);
}

TEST_CASE("strong chain: Alice's frozen-side assignment equals Bob's use, stable-B setup") {
    // N=2^12 menu with the mixed third block, r_add=0.05, fixed seed chosen
    // to give a clean run so the send/use logs must agree bit for bit
    const std::size_t n = std::size_t{1} << 12;
    auto cfg = base_cfg(SchemeKind::Strong, n, 0.1, {0.4, 0.5}, 3, 2020);
    cfg.r_add = 0.05;
    Rng mix(7);
    std::vector<double> eps(n);
    for (auto& e : eps) e = mix.bit() ? 0.5 : 0.4;
    cfg.menu.profiles.push_back(ErasureProfile(eps));
    cfg.menu.tags.push_back("mixed");

    const auto c = make_construction(cfg);
    const auto run = strong_run(cfg, c);
    const auto bob = experimental_ber(run, Party::Bob);
    REQUIRE(bob.errors == 0); // seed-pinned clean run
    for (std::size_t t = 1; t < run.blocks.size(); ++t) {
        const auto& b = run.blocks[t];
        const Frame sent = gather(b.u, b.carry_targets);
        const Frame used = gather(b.bob_u, b.carry_targets);
        REQUIRE(sent == run.blocks[t - 1].alice_carry);
        REQUIRE(used == run.blocks[t - 1].bob_carry);
        REQUIRE(sent == used);
    }
}

TEST_CASE("weak run under the reference setup stays below the union bound") {
    const std::size_t n = std::size_t{1} << 12;
    const std::uint32_t trials = 40;
    auto cfg0 = base_cfg(SchemeKind::Weak, n, 0.1, {0.4, 0.5}, 3, 500);
    const auto c = make_construction(cfg0);

    std::uint64_t errs = 0, bits = 0;
    double bound = 0.0;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        auto cfg = cfg0;
        cfg.seed = derive_seed(500, {seedtag::kTrial, trial});
        cfg.policy.seed = derive_seed(500, {seedtag::kStateSeq, trial});
        auto run = weak_run(cfg, c);
        const auto rep = experimental_ber(run, Party::Bob);
        errs += rep.errors;
        bits += rep.bits;
        if (trial == 0) bound = pe_bound(partitions_of(run), run.z_main, SchemeKind::Weak);
    }
    REQUIRE(bits > 0);
    const double ber = static_cast<double>(errs) / static_cast<double>(bits);
    const double sigma = std::sqrt(std::max(ber * (1 - ber), 1e-9) / static_cast<double>(bits));
    CHECK(ber <= bound + 3 * sigma); // BER is dominated by the block-error bound
}

TEST_CASE("key and carry bits always sit in the realized H_wire") {
    for (SchemeKind kind : {SchemeKind::Weak, SchemeKind::Strong}) {
        auto cfg = base_cfg(kind, 256, 0.05, {0.6, 0.7}, 3, 77);
        const auto c = make_construction(cfg);
        const auto run = scheme_run(cfg, c);
        for (const auto& b : run.blocks) {
            CHECK(is_subset(b.key_set, b.part.base.H_wire));
            if (kind == SchemeKind::Strong) {
                CHECK(is_subset(b.part.base.F, b.part.base.H_wire));
                CHECK(is_subset(b.part.B_prime, b.part.base.H_wire));
            }
        }
    }
}

TEST_CASE("no pad bit is reused across blocks") {
    auto cfg = base_cfg(SchemeKind::Weak, 256, 0.05, {0.6, 0.7}, 5, 31);
    const auto c = make_construction(cfg);
    const auto run = weak_run(cfg, c);
    std::set<std::pair<std::uint32_t, std::uint32_t>> sources;
    for (std::size_t t = 1; t < run.blocks.size(); ++t) {
        // pad for block t was extracted from block t-1 at its key positions
        for (std::uint32_t i : run.blocks[t].msg_set) {
            const auto key = std::make_pair(static_cast<std::uint32_t>(t - 1), i);
            REQUIRE(sources.insert(key).second);
        }
        REQUIRE(run.blocks[t].msg_set == run.blocks[t - 1].key_set);
    }
}

TEST_CASE("weak scheme publishes zeros on the frozen side, strong scheme never does") {
    auto wcfg = base_cfg(SchemeKind::Weak, 512, 0.1, {0.4, 0.5}, 3, 41);
    const auto wc = make_construction(wcfg);
    const auto wrun = weak_run(wcfg, wc);
    for (const auto& b : wrun.blocks)
        for (std::uint32_t i : wrun.frozen_global) CHECK(b.u[i] == 0);

    auto scfg = base_cfg(SchemeKind::Strong, 512, 0.1, {0.4, 0.5}, 3, 41);
    const auto sc = make_construction(scfg);
    const auto srun = strong_run(scfg, sc);
    std::size_t ones = 0, total = 0;
    for (const auto& b : srun.blocks) {
        for (std::uint32_t i : srun.frozen_global) {
            ones += b.u[i];
            ++total;
        }
        const Frame planted = gather(b.u, b.carry_targets);
        if (b.t > 0) CHECK(planted == srun.blocks[b.t - 1].alice_carry);
    }
    // secret-sourced values, not a public constant: fraction of ones is coin-like
    const double frac = static_cast<double>(ones) / static_cast<double>(total);
    const double sigma = std::sqrt(0.25 / static_cast<double>(total));
    CHECK(std::abs(frac - 0.5) < 4 * sigma);
}

TEST_CASE("pad randomization: filler statistics do not depend on the message") {
    // same channel seeds, message all-zeros vs random: x restricted to the
    // R positions keeps the same ones-fraction within Monte Carlo noise
    const std::size_t n = 1024;
    auto count_ones_on_r = [&](MessageMode mode, std::uint64_t seed) {
        auto cfg = base_cfg(SchemeKind::Weak, n, 0.1, {0.4, 0.5}, 3, seed);
        cfg.message_mode = mode;
        const auto c = make_construction(cfg);
        const auto run = weak_run(cfg, c);
        std::size_t ones = 0, total = 0;
        for (const auto& b : run.blocks) {
            for (std::uint32_t i : b.part.base.R) {
                ones += b.x[i];
                ++total;
            }
        }
        return std::make_pair(ones, total);
    };
    std::size_t ones_z = 0, tot_z = 0, ones_r = 0, tot_r = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto [oz, tz] = count_ones_on_r(MessageMode::Zeros, 900 + s);
        auto [orr, tr] = count_ones_on_r(MessageMode::Random, 900 + s);
        ones_z += oz;
        tot_z += tz;
        ones_r += orr;
        tot_r += tr;
    }
    const double fz = static_cast<double>(ones_z) / static_cast<double>(tot_z);
    const double fr = static_cast<double>(ones_r) / static_cast<double>(tot_r);
    const double sigma = std::sqrt(0.25 / tot_z + 0.25 / tot_r);
    CHECK(std::abs(fz - fr) < 3 * sigma);
}

TEST_CASE("eve sanity: clean wiretap reads everything, erased wiretap guesses") {
    // degenerate clean wiretap channel: H_wire is empty so no message bits
    // exist, but eve recovers every transmitted frame exactly
    auto clean = base_cfg(SchemeKind::Weak, 256, 0.0, {0.0}, 3, 55);
    const auto cc = make_construction(clean);
    auto crun = weak_run(clean, cc);
    eve_attack(crun, 123);
    for (const auto& b : crun.blocks) {
        REQUIRE(b.msg.empty());
        CHECK(b.eve_u == b.u);
        CHECK(b.eve_guessed.empty());
    }

    // fully erasing wiretap channel: pure guessing
    auto blind = base_cfg(SchemeKind::Weak, 1024, 0.0, {1.0}, 3, 56);
    std::uint64_t errs = 0, bits = 0;
    const auto bc = make_construction(blind);
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto cfg = blind;
        cfg.seed = derive_seed(56, {seedtag::kTrial, s});
        auto run = weak_run(cfg, bc);
        eve_attack(run, derive_seed(cfg.seed, {99}));
        const auto rep = experimental_ber(run, Party::Eve);
        errs += rep.errors;
        bits += rep.bits;
    }
    const double ber = static_cast<double>(errs) / static_cast<double>(bits);
    const double sigma = std::sqrt(0.25 / static_cast<double>(bits));
    CHECK(std::abs(ber - 0.5) < 3 * sigma);
}

TEST_CASE("arbitrarily varying wiretap: per-block partitions come from the realized profile") {
    for (SchemeKind kind : {SchemeKind::Weak, SchemeKind::Strong}) {
        auto cfg = base_cfg(kind, 256, 0.0, {0.4, 0.5}, 3, 63);
        cfg.state_kind = StateKind::Arbitrary;
        const auto c = make_construction(cfg);
        const auto run = scheme_run(cfg, c);
        for (const auto& b : run.blocks) {
            REQUIRE(b.state.kind == StateKind::Arbitrary);
            REQUIRE(b.state.symbol_states.size() == 256);
            if (b.t > 0) CHECK(b.m_hat == b.msg); // noiseless main channel
            // the realized profile really drove this block's partition
            const auto prof = realized_profile(b.state, cfg.menu, cfg.uncertainty.states);
            const auto zw = evolve_bec(prof);
            const auto expect = partition_block(c.z_main, zw, c.pcfg, b.state.tag());
            CHECK(b.part.base.I == expect.I);
            CHECK(b.part.base.B == expect.B);
        }
        CHECK(run.csi.premature_accesses() == 0);
    }
}

TEST_CASE("payload mode round-trips a file over a clean channel") {
    auto cfg = base_cfg(SchemeKind::Weak, 256, 0.0, {0.4}, 3, 60);
    cfg.message_mode = MessageMode::Payload;
    Rng rng(8);
    cfg.payload.resize(150); // must fit into the T=3 chain's message budget
    for (auto& b : cfg.payload) b = rng.bit();
    const auto c = make_construction(cfg);
    const auto run = weak_run(cfg, c);
    Frame decoded;
    for (const auto& b : run.blocks) decoded.insert(decoded.end(), b.m_hat.begin(), b.m_hat.end());
    REQUIRE(decoded.size() >= cfg.payload.size());
    for (std::size_t i = 0; i < cfg.payload.size(); ++i) REQUIRE(decoded[i] == cfg.payload[i]);
    for (std::size_t i = cfg.payload.size(); i < decoded.size(); ++i) REQUIRE(decoded[i] == 0);
}

TEST_CASE("scheme config validation") {
    auto cfg = base_cfg(SchemeKind::Weak, 128, 0.1, {0.4}, 3, 1);
    cfg.n = 100;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // N not a power of two
    cfg.n = 128;
    cfg.beta = 0.7;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.beta = 0.25;
    cfg.r_add = 0.05;
    cfg.state_kind = StateKind::Arbitrary;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // stabilizer needs block menu
}
