#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/metrics.hpp"
#include "secpolar/partition.hpp"
#include "secpolar/schemes.hpp"

namespace secpolar {

// fixed-width-free deterministic double formatting for CSV output
inline std::string fmt_g(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary); // binary: no platform newline translation
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

/// Per-index construction dump: index, z_main, z_wire and the most refined
/// set label (Iprime/Bprime/Badd when the strong split is present).
inline void write_partition_csv(const std::string& path, const StrongPartition& sp,
                                const ReliabilityProfile& z_main, const ReliabilityProfile& z_wire) {
    const Partition& p = sp.base;
    std::vector<const char*> label(p.n, "?");
    auto mark = [&](const IndexSet& s, const char* name) {
        for (std::uint32_t i : s) label[i] = name;
    };
    mark(p.I, "I");
    mark(p.F, "F");
    mark(p.R, "R");
    mark(p.B, "B");
    mark(sp.B_add, "Badd");
    mark(sp.I_prime, "Iprime");
    mark(sp.B_prime, "Bprime");

    auto f = open_out(path);
    f << "index,z_main,z_wire,set_label\n";
    for (std::uint32_t i = 0; i < p.n; ++i)
        f << i << ',' << fmt_g(z_main.z[i]) << ',' << fmt_g(z_wire.z[i]) << ',' << label[i] << '\n';
}

inline void write_index_set_csv(const std::string& path, const IndexSet& s, const std::string& name) {
    auto f = open_out(path);
    f << "index,set_label\n";
    for (std::uint32_t i : s) f << i << ',' << name << '\n';
}

/// One sweep row per (scheme, N, beta) grid point.
struct SweepRow {
    std::string scheme;
    std::size_t n = 0;
    double beta = 0.0;
    std::uint32_t T = 0;
    double pe_bound = std::numeric_limits<double>::quiet_NaN();
    double leakage_upper = std::numeric_limits<double>::quiet_NaN();
    double leakage_rate = std::numeric_limits<double>::quiet_NaN();
    double secrecy_rate = std::numeric_limits<double>::quiet_NaN();
    double bob_ber = std::numeric_limits<double>::quiet_NaN();
    double eve_ber = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
};

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    auto f = open_out(path);
    f << "scheme,N,beta,T,pe_bound,leakage_upper,leakage_rate,secrecy_rate,bob_ber,eve_ber,seed\n";
    for (const auto& r : rows)
        f << r.scheme << ',' << r.n << ',' << fmt_g(r.beta) << ',' << r.T << ',' << fmt_g(r.pe_bound)
          << ',' << fmt_g(r.leakage_upper) << ',' << fmt_g(r.leakage_rate) << ','
          << fmt_g(r.secrecy_rate) << ',' << fmt_g(r.bob_ber) << ',' << fmt_g(r.eve_ber) << ','
          << r.seed << '\n';
}

inline void write_plot_recipe(const std::string& path, const std::string& body) {
    auto f = open_out(path);
    f << body;
}

namespace detail {

inline void put_u32(std::ofstream& f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_packed(std::ofstream& f, const Frame& bits) {
    put_u32(f, static_cast<std::uint32_t>(bits.size()));
    const auto bytes = pack_bits(bits);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void put_symbols(std::ofstream& f, const ReceivedWord& w) {
    put_u32(f, static_cast<std::uint32_t>(w.size()));
    for (Symbol s : w) f.put(static_cast<char>(static_cast<std::uint8_t>(s))); // Erased dumps as 0xFF
}

} // namespace detail

/// Binary transcript of one chained run. Frames are packed little-endian
/// bit arrays; channel symbols are one byte each with 0xFF for an erasure.
inline void write_transcript_bin(const std::string& path, const RunResult& run) {
    auto f = open_out(path);
    f.write("SPTB", 4);
    detail::put_u32(f, 1); // format version
    detail::put_u32(f, static_cast<std::uint32_t>(run.n));
    detail::put_u32(f, run.T);
    detail::put_u32(f, run.kind == SchemeKind::Weak ? 0u : 1u);
    for (const auto& b : run.blocks) {
        detail::put_u32(f, b.t);
        const std::string tag = b.state.tag();
        detail::put_u32(f, static_cast<std::uint32_t>(tag.size()));
        f.write(tag.data(), static_cast<std::streamsize>(tag.size()));
        detail::put_packed(f, b.u);
        detail::put_packed(f, b.x);
        detail::put_symbols(f, b.y);
        detail::put_symbols(f, b.z);
        detail::put_packed(f, b.bob_u);
        detail::put_packed(f, b.msg);
        detail::put_packed(f, b.cipher);
        detail::put_packed(f, b.m_hat);
        detail::put_packed(f, b.eve_m_hat);
    }
}

/// Per-block metrics of one run as CSV.
inline void write_transcript_csv(const std::string& path, const RunResult& run) {
    auto f = open_out(path);
    f << "t,state,msg_bits,bob_bit_errors,eve_bit_errors,bob_guessed,eve_guessed,I,Iprime,F,R,B\n";
    for (const auto& b : run.blocks) {
        std::uint64_t bob_err = 0, eve_err = 0;
        for (std::size_t i = 0; i < b.msg.size(); ++i) {
            bob_err += !b.m_hat.empty() && b.m_hat[i] != b.msg[i];
            eve_err += !b.eve_m_hat.empty() && b.eve_m_hat[i] != b.msg[i];
        }
        f << b.t << ',' << b.state.tag() << ',' << b.msg.size() << ',' << bob_err << ',' << eve_err
          << ',' << b.bob_guessed.size() << ',' << b.eve_guessed.size() << ',' << b.part.base.I.size()
          << ',' << b.part.I_prime.size() << ',' << b.part.base.F.size() << ',' << b.part.base.R.size()
          << ',' << b.part.base.B.size() << '\n';
    }
}

} // namespace secpolar
