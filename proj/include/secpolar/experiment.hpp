#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "secpolar/config.hpp"
#include "secpolar/csv.hpp"
#include "secpolar/metrics.hpp"
#include "secpolar/schemes.hpp"

namespace secpolar {

namespace seedtag {
constexpr std::uint64_t kTrial = 16;
constexpr std::uint64_t kMenuMix = 17;
constexpr std::uint64_t kEveAttack = 18;
} // namespace seedtag

/// Runs fn(0..count) on a small worker pool. Results must go into
/// per-index slots; output order is then independent of scheduling.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count ? count : 1)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Wiretap block menu for one block length. Menu3 is the stable-B
/// experiment layout: one stationary block per state plus one fixed
/// non-stationary block mixing the states uniformly (realization drawn
/// once from the config seed, so construction and simulation agree).
inline WiretapMenu build_menu(const ExperimentConfig& cfg, std::size_t n) {
    WiretapMenu menu = WiretapMenu::from_states(cfg.states, n);
    if (cfg.wiretap == WiretapModel::Menu3) {
        Rng rng(derive_seed(cfg.seed, {seedtag::kMenuMix, n}));
        std::vector<double> eps(n);
        for (auto& e : eps) e = cfg.states[rng.below(cfg.states.size())];
        menu.profiles.push_back(ErasureProfile(std::move(eps)));
        menu.tags.push_back("mixed");
    }
    return menu;
}

inline std::vector<Bit> load_payload_bits(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("payload: cannot open file " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return unpack_bits(bytes, bytes.size() * 8);
}

/// Per-trial scheme configuration. State-sequence and run seeds depend on
/// (master seed, trial) but never on N or beta, so sweeps across sizes see
/// the same adversary choices and message prefixes.
inline SchemeConfig scheme_config_at(const ExperimentConfig& cfg, std::size_t n, double beta,
                                     std::uint32_t trial, WiretapMenu menu, std::vector<Bit> payload) {
    SchemeConfig sc;
    sc.kind = cfg.scheme;
    sc.n = n;
    sc.T = cfg.T;
    sc.beta = beta;
    sc.uncertainty = UncertaintySet{cfg.main_eps, cfg.states};
    sc.state_kind = cfg.wiretap == WiretapModel::Arbitrary ? StateKind::Arbitrary : StateKind::Block;
    sc.menu = std::move(menu);
    sc.policy.kind = cfg.policy;
    sc.policy.seed = derive_seed(cfg.seed, {seedtag::kStateSeq, trial});
    sc.policy.sequence = cfg.sequence;
    const std::size_t n_states =
        sc.state_kind == StateKind::Arbitrary ? cfg.states.size() : sc.menu.size();
    sc.policy.sweep_state = static_cast<std::uint32_t>(trial % n_states);
    sc.r_add = cfg.scheme == SchemeKind::Strong ? cfg.r_add : 0.0;
    sc.seed = derive_seed(cfg.seed, {seedtag::kTrial, trial});
    sc.message_mode = cfg.message_mode;
    sc.payload = std::move(payload);
    return sc;
}

// ---- sequence-aggregated bounds (identical math to metrics.hpp without
// materializing T+1 partitions; checked against it in the tests) ----

struct StateStats {
    double sum_z_info = 0.0;   // sum of z_main over I (weak) or I' (strong)
    double sum_z_bprime = 0.0; // strong only
    std::size_t info_size = 0; // |I| or |I'|
    std::size_t b_size = 0;
    std::size_t r_size = 0;
    double strong_leak = 0.0; // sum over I' u B' u F of (1 - z_wire^2)
};

inline StateStats state_stats(const StrongPartition& sp, const ReliabilityProfile& zm,
                              const ReliabilityProfile& zw, SchemeKind kind) {
    StateStats st;
    const IndexSet& info = kind == SchemeKind::Weak ? sp.base.I : sp.I_prime;
    for (std::uint32_t i : info) st.sum_z_info += zm.z[i];
    for (std::uint32_t i : sp.B_prime) st.sum_z_bprime += zm.z[i];
    st.info_size = info.size();
    st.b_size = sp.base.B.size();
    st.r_size = sp.base.R.size();
    if (kind == SchemeKind::Strong) {
        const IndexSet counted = set_union(set_union(sp.I_prime, sp.B_prime), sp.base.F);
        for (std::uint32_t i : counted) st.strong_leak += 1.0 - zw.z[i] * zw.z[i];
    }
    return st;
}

struct GridBounds {
    double pe = 0.0;
    double leak = 0.0;
    double rate = 0.0;
};

inline GridBounds accumulate_bounds(const std::vector<StateStats>& per_state,
                                    const std::vector<std::uint32_t>& state_seq, SchemeKind kind,
                                    std::size_t n, std::uint32_t T, double delta) {
    GridBounds g;
    double bits = 0.0;
    for (std::uint32_t t = 0; t <= T; ++t) {
        const StateStats& st = per_state[state_seq[t]];
        if (t < T) {
            g.pe += 2.0 * st.sum_z_info + (kind == SchemeKind::Strong ? st.sum_z_bprime : 0.0);
            bits += static_cast<double>(st.info_size);
            if (kind == SchemeKind::Weak)
                g.leak += static_cast<double>(st.b_size) + binary_entropy(delta) +
                          static_cast<double>(st.r_size) * delta;
        }
        if (kind == SchemeKind::Strong) g.leak += st.strong_leak;
    }
    g.rate = bits / (static_cast<double>(n) * (static_cast<double>(T) + 1.0));
    return g;
}

// ---- command drivers ----

inline std::string scheme_name(SchemeKind k) { return k == SchemeKind::Weak ? "weak" : "strong"; }

namespace detail {

inline std::string grid_tag(const ExperimentConfig& cfg, std::size_t n, double beta) {
    return scheme_name(cfg.scheme) + "_N" + std::to_string(n) + "_beta" + fmt_g(beta);
}

inline std::vector<std::uint32_t> block_state_sequence(const SchemeConfig& sc, std::size_t n_states) {
    std::vector<std::uint32_t> seq(sc.T + 1);
    for (std::uint32_t t = 0; t <= sc.T; ++t)
        seq[t] = sample_state(sc.policy, n_states, t, StateKind::Block, sc.n).block_state;
    return seq;
}

} // namespace detail

/// construct: per-state reliability profiles and partitions as CSV, one
/// file per (N, beta, state), plus the B_add listing for stable-B setups.
inline void cmd_construct(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    struct Job {
        std::size_t n;
        double beta;
    };
    std::vector<Job> jobs;
    for (std::size_t n : cfg.n_list)
        for (double beta : cfg.beta_list) jobs.push_back({n, beta});
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
        const auto [n, beta] = jobs[j];
        SchemeConfig sc = scheme_config_at(cfg, n, beta, 0, build_menu(cfg, n), {});
        sc.state_kind = StateKind::Block; // partitions exist per menu entry
        const Construction c = make_construction(sc);
        for (std::size_t s = 0; s < sc.menu.size(); ++s) {
            const std::string path = cfg.out_dir + "/partition_" + detail::grid_tag(cfg, n, beta) +
                                     "_s" + std::to_string(s) + "_" + sc.menu.tags[s] + ".csv";
            write_partition_csv(path, c.per_state[s], c.z_main, c.wire_z[s]);
        }
        if (cfg.scheme == SchemeKind::Strong && !c.per_state.front().B_add.empty())
            write_index_set_csv(cfg.out_dir + "/badd_" + detail::grid_tag(cfg, n, beta) + ".csv",
                                c.per_state.front().B_add, "Badd");
    });
}

/// bounds: the theoretical sweep. No transmissions; per grid point the
/// T+1 block states are drawn (or swept) and the Prop-style bounds are
/// accumulated from per-state partition sums.
inline std::vector<SweepRow> cmd_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    struct Job {
        std::size_t n;
        double beta;
    };
    std::vector<Job> jobs;
    for (std::size_t n : cfg.n_list)
        for (double beta : cfg.beta_list) jobs.push_back({n, beta});
    std::vector<SweepRow> rows(jobs.size());

    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
        const auto [n, beta] = jobs[j];
        SweepRow row;
        row.scheme = scheme_name(cfg.scheme);
        row.n = n;
        row.beta = beta;
        row.T = cfg.T;
        row.seed = cfg.seed;

        SchemeConfig sc = scheme_config_at(cfg, n, beta, 0, build_menu(cfg, n), {});
        const Construction c = make_construction(sc);
        const double delta = c.pcfg.delta;

        if (sc.state_kind == StateKind::Block) {
            std::vector<StateStats> stats;
            for (std::size_t s = 0; s < sc.menu.size(); ++s)
                stats.push_back(state_stats(c.per_state[s], c.z_main, c.wire_z[s], cfg.scheme));
            if (cfg.policy == PolicyKind::WorstCaseSweep) {
                // Def-3 style: criteria take the max over realizations, the
                // rate its min; additive bounds attain these on constant runs
                bool first = true;
                for (std::uint32_t s = 0; s < sc.menu.size(); ++s) {
                    const std::vector<std::uint32_t> seq(cfg.T + 1, s);
                    const GridBounds g = accumulate_bounds(stats, seq, cfg.scheme, n, cfg.T, delta);
                    if (first || g.pe > row.pe_bound) row.pe_bound = g.pe;
                    if (first || g.leak > row.leakage_upper) row.leakage_upper = g.leak;
                    if (first || g.rate < row.secrecy_rate) row.secrecy_rate = g.rate;
                    first = false;
                }
            } else {
                const auto seq = detail::block_state_sequence(sc, sc.menu.size());
                const GridBounds g = accumulate_bounds(stats, seq, cfg.scheme, n, cfg.T, delta);
                row.pe_bound = g.pe;
                row.leakage_upper = g.leak;
                row.secrecy_rate = g.rate;
            }
        } else {
            // arbitrarily varying: every block needs its own realized profile
            double pe = 0.0, leak = 0.0, bits = 0.0;
            for (std::uint32_t t = 0; t <= cfg.T; ++t) {
                const WiretapState st =
                    sample_state(sc.policy, cfg.states.size(), t, StateKind::Arbitrary, n);
                ReliabilityProfile zw;
                const StrongPartition sp = secpolar::detail::realized_partition(sc, c, st, zw);
                const StateStats ss = state_stats(sp, c.z_main, zw, cfg.scheme);
                if (t < cfg.T) {
                    pe += 2.0 * ss.sum_z_info +
                          (cfg.scheme == SchemeKind::Strong ? ss.sum_z_bprime : 0.0);
                    bits += static_cast<double>(ss.info_size);
                    if (cfg.scheme == SchemeKind::Weak)
                        leak += static_cast<double>(ss.b_size) + binary_entropy(delta) +
                                static_cast<double>(ss.r_size) * delta;
                }
                if (cfg.scheme == SchemeKind::Strong) leak += ss.strong_leak;
            }
            row.pe_bound = pe;
            row.leakage_upper = leak;
            row.secrecy_rate = bits / (static_cast<double>(n) * (static_cast<double>(cfg.T) + 1.0));
        }
        row.leakage_rate = row.leakage_upper / (static_cast<double>(n) * (static_cast<double>(cfg.T) + 1.0));
        rows[j] = std::move(row);
    });

    write_sweep_csv(cfg.out_dir + "/bounds_sweep.csv", rows);
    write_plot_recipe(cfg.out_dir + "/bounds_plot_recipe.txt",
                      "bounds_sweep.csv\n"
                      "  fig A (decoding error bound): x = log2(N), y = pe_bound, log y, one series per beta\n"
                      "  fig B (leakage bound):        x = log2(N), y = leakage_upper, log y, one series per beta\n"
                      "  fig C (leakage rate):         x = log2(N), y = leakage_rate, log y, one series per beta\n"
                      "  fig D (secrecy rate):         x = log2(N), y = secrecy_rate, linear y, one series per beta\n");
    return rows;
}

/// simulate: full Monte Carlo communication runs. Pools Bob/Eve BER over
/// trials; bound columns come from trial 0's realized block sequence.
inline std::vector<SweepRow> cmd_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const std::vector<Bit> payload =
        cfg.message_mode == MessageMode::Payload ? load_payload_bits(cfg.payload_path) : std::vector<Bit>{};

    struct Job {
        std::size_t n;
        double beta;
    };
    std::vector<Job> jobs;
    for (std::size_t n : cfg.n_list)
        for (double beta : cfg.beta_list) jobs.push_back({n, beta});
    std::vector<SweepRow> rows(jobs.size());

    // worker pool over (grid point x trial) jobs, pooled with integer counters
    struct PointAccum {
        std::mutex mtx;
        std::uint64_t bob_err = 0, bob_bits = 0, eve_err = 0, eve_bits = 0;
        // per sweep-state pools for the worst-case policy
        std::vector<std::uint64_t> swe_bob_err, swe_bob_bits, swe_eve_err, swe_eve_bits;
    };
    std::vector<PointAccum> accum(jobs.size());
    const std::size_t n_sweep_states = cfg.wiretapped_menu_size();
    for (auto& a : accum) {
        a.swe_bob_err.assign(n_sweep_states, 0);
        a.swe_bob_bits.assign(n_sweep_states, 0);
        a.swe_eve_err.assign(n_sweep_states, 0);
        a.swe_eve_bits.assign(n_sweep_states, 0);
    }

    std::vector<std::pair<std::size_t, std::uint32_t>> work; // (grid index, trial)
    for (std::size_t j = 0; j < jobs.size(); ++j)
        for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) work.emplace_back(j, trial);

    parallel_for(work.size(), cfg.threads, [&](std::size_t w) {
        const auto [j, trial] = work[w];
        const auto [n, beta] = jobs[j];
        SchemeConfig sc = scheme_config_at(cfg, n, beta, trial, build_menu(cfg, n), payload);
        const Construction c = make_construction(sc);
        RunResult run = scheme_run(sc, c);
        eve_attack(run, derive_seed(sc.seed, {seedtag::kEveAttack}));
        if (run.csi.premature_accesses() != 0)
            throw std::logic_error("premature CSI access detected"); // causality contract
        const BerReport bob = experimental_ber(run, Party::Bob);
        const BerReport eve = experimental_ber(run, Party::Eve);
        {
            auto& a = accum[j];
            std::lock_guard<std::mutex> lock(a.mtx);
            a.bob_err += bob.errors;
            a.bob_bits += bob.bits;
            a.eve_err += eve.errors;
            a.eve_bits += eve.bits;
            if (cfg.policy == PolicyKind::WorstCaseSweep) {
                const std::size_t s = sc.policy.sweep_state;
                a.swe_bob_err[s] += bob.errors;
                a.swe_bob_bits[s] += bob.bits;
                a.swe_eve_err[s] += eve.errors;
                a.swe_eve_bits[s] += eve.bits;
            }
        }
        if (trial == 0) {
            // bound columns for this grid point, from the realized sequence
            const BoundReport rep = bound_report(partitions_of(run), run.z_main,
                                                 wire_profiles_of(run), cfg.scheme, c.pcfg.delta, n,
                                                 cfg.T, beta);
            SweepRow row;
            row.scheme = scheme_name(cfg.scheme);
            row.n = n;
            row.beta = beta;
            row.T = cfg.T;
            row.seed = cfg.seed;
            row.pe_bound = rep.pe_upper;
            row.leakage_upper = rep.leakage_upper;
            row.leakage_rate = rep.leakage_rate_upper;
            row.secrecy_rate = rep.secrecy_rate;
            rows[j] = std::move(row);
        }
        const bool dump_this = cfg.dump == DumpMode::All || (cfg.dump == DumpMode::First && trial == 0);
        if (dump_this) {
            const std::string base = cfg.out_dir + "/run_" + detail::grid_tag(cfg, n, beta) + "_trial" +
                                     std::to_string(trial);
            write_transcript_csv(base + ".csv", run);
            write_transcript_bin(base + ".bin", run);
            if (cfg.message_mode == MessageMode::Payload && trial == 0) {
                Frame decoded;
                for (const auto& b : run.blocks)
                    decoded.insert(decoded.end(), b.m_hat.begin(), b.m_hat.end());
                if (decoded.size() > payload.size()) decoded.resize(payload.size());
                const auto bytes = pack_bits(decoded);
                auto f = open_out(base + "_payload.bin");
                f.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
            }
        }
    });

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto& a = accum[j];
        if (cfg.policy == PolicyKind::WorstCaseSweep) {
            // report the worst state's pooled BER
            double worst_bob = std::numeric_limits<double>::quiet_NaN();
            double worst_eve = std::numeric_limits<double>::quiet_NaN();
            for (std::size_t s = 0; s < n_sweep_states; ++s) {
                if (a.swe_bob_bits[s]) {
                    const double v = static_cast<double>(a.swe_bob_err[s]) / a.swe_bob_bits[s];
                    if (std::isnan(worst_bob) || v > worst_bob) worst_bob = v;
                }
                if (a.swe_eve_bits[s]) {
                    const double v = static_cast<double>(a.swe_eve_err[s]) / a.swe_eve_bits[s];
                    if (std::isnan(worst_eve) || v > worst_eve) worst_eve = v;
                }
            }
            rows[j].bob_ber = worst_bob;
            rows[j].eve_ber = worst_eve;
        } else {
            rows[j].bob_ber = a.bob_bits ? static_cast<double>(a.bob_err) / a.bob_bits
                                         : std::numeric_limits<double>::quiet_NaN();
            rows[j].eve_ber = a.eve_bits ? static_cast<double>(a.eve_err) / a.eve_bits
                                         : std::numeric_limits<double>::quiet_NaN();
        }
    }

    write_sweep_csv(cfg.out_dir + "/simulate_sweep.csv", rows);
    write_plot_recipe(cfg.out_dir + "/simulate_plot_recipe.txt",
                      "simulate_sweep.csv\n"
                      "  fig A (legitimate BER): x = log2(N), y = bob_ber, log y, one series per beta\n"
                      "  fig B (eavesdropper BER): x = log2(N), y = eve_ber, linear y in [0,1], one series per beta\n"
                      "bob_ber / eve_ber pool all trials; bound columns use trial 0's block sequence\n");
    return rows;
}

/// rate-calc: the chaining-rate comparison. For every (N, beta, state) it
/// reports the rate of chaining all of (L_main)^c against chaining only a
/// B-sized slice of I, next to the channel-pair secrecy capacity.
inline void cmd_rate_calc(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    auto f = open_out(cfg.out_dir + "/rate_calc.csv");
    f << "N,beta,state,cs_asymptotic,cs_finite,naive_rate,modified_rate,frozen_rate\n";
    for (std::size_t n : cfg.n_list) {
        const WiretapMenu menu = build_menu(cfg, n);
        const ReliabilityProfile zm = evolve_bec(ErasureProfile::stationary(n, cfg.main_eps));
        for (double beta : cfg.beta_list) {
            const PartitionConfig pcfg = PartitionConfig::from_beta(n, beta);
            for (std::size_t s = 0; s < menu.size(); ++s) {
                const ReliabilityProfile zw = evolve_bec(menu.profiles[s]);
                const Partition p = partition_block(zm, zw, pcfg, menu.tags[s]);
                const RateSacrifice r = rate_sacrifice(p);
                const double cs_asym = menu.profiles[s].mean() - cfg.main_eps;
                f << n << ',' << fmt_g(beta) << ',' << menu.tags[s] << ',' << fmt_g(cs_asym) << ','
                  << fmt_g(r.cs_finite) << ',' << fmt_g(r.naive_rate) << ',' << fmt_g(r.modified_rate)
                  << ',' << fmt_g(r.frozen_rate) << '\n';
            }
        }
    }
}

} // namespace secpolar
