#pragma once

/// On-disk formats: field snapshots (JSON header + raw complex128 binary),
/// invariant/decay CSV series, and JSON reports. Doubles go to CSV with 17
/// significant digits so rereads round-trip bit-exactly.

#include "nls2/evolve.hpp"
#include "nls2/functionals.hpp"
#include "nls2/grid.hpp"
#include "nls2/groundstate.hpp"
#include "nls2/scatter.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nls2::io {

using nlohmann::json;

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Field snapshots
// ---------------------------------------------------------------------------

inline std::string binary_path_for(const std::string& json_path) {
    if (json_path.size() >= 5 && json_path.substr(json_path.size() - 5) == ".json")
        return json_path.substr(0, json_path.size() - 5) + ".bin";
    return json_path + ".bin";
}

/// Header {n_per_axis, box_length, time, beta, dtype, order, fields} next to
/// a raw little-endian binary of interleaved (re, im) doubles, u block then v.
inline void write_snapshot(const std::string& json_path, const SystemState& s) {
    json header = {
        {"n_per_axis", s.u.grid.n},
        {"box_length", s.u.grid.length},
        {"time", s.time},
        {"beta", s.beta},
        {"dtype", "complex128"},
        {"order", "row-major xyz"},
        {"fields", json::array({"u", "v"})},
    };
    std::ofstream jf(json_path);
    if (!jf) throw std::runtime_error("write_snapshot: cannot open " + json_path);
    jf << header.dump(2) << "\n";

    std::ofstream bf(binary_path_for(json_path), std::ios::binary);
    if (!bf) throw std::runtime_error("write_snapshot: cannot open " + binary_path_for(json_path));
    auto dump_field = [&](const ComplexField& f) {
        bf.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(complexd)));
    };
    dump_field(s.u);
    dump_field(s.v);
    if (!bf) throw std::runtime_error("write_snapshot: short write to binary file");
}

inline SystemState read_snapshot(const std::string& json_path) {
    std::ifstream jf(json_path);
    if (!jf) throw std::runtime_error("read_snapshot: cannot open " + json_path);
    json header;
    jf >> header;
    if (header.at("dtype") != "complex128" || header.at("order") != "row-major xyz")
        throw std::runtime_error("read_snapshot: unsupported layout in " + json_path);

    Grid g = make_grid(header.at("n_per_axis").get<int>(), header.at("box_length").get<double>());
    SystemState s = make_state(g, header.at("beta").get<double>());
    s.time = header.at("time").get<double>();

    std::ifstream bf(binary_path_for(json_path), std::ios::binary);
    if (!bf) throw std::runtime_error("read_snapshot: cannot open " + binary_path_for(json_path));
    auto load_field = [&](ComplexField& f) {
        bf.read(reinterpret_cast<char*>(f.values.data()),
                static_cast<std::streamsize>(f.values.size() * sizeof(complexd)));
        if (bf.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(complexd)))
            throw std::runtime_error("read_snapshot: binary file too short for the header grid");
    };
    load_field(s.u);
    load_field(s.v);
    return s;
}

// ---------------------------------------------------------------------------
// CSV series
// ---------------------------------------------------------------------------

inline const char* invariant_csv_header() {
    return "time,mass,Fx,Fy,Fz,energy,kinetic,quartic,S,J,K";
}

inline void append_invariant_row(std::ostream& out, const InvariantReport& r) {
    out << format_double(r.time) << ',' << format_double(r.mass) << ','
        << format_double(r.momentum[0]) << ',' << format_double(r.momentum[1]) << ','
        << format_double(r.momentum[2]) << ',' << format_double(r.energy) << ','
        << format_double(r.kinetic) << ',' << format_double(r.quartic) << ','
        << format_double(r.s_value) << ',' << format_double(r.j_value) << ','
        << format_double(r.k_value) << '\n';
}

inline void write_invariant_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_invariant_csv: cannot open " + path);
    out << invariant_csv_header() << '\n';
    for (const auto& rec : traj.records) append_invariant_row(out, rec.invariants);
}

inline void write_decay_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_decay_csv: cannot open " + path);
    out << "time,l4_u,l4_v,l5pow_u,l5pow_v,l5_accumulated,tail_fraction,max_amplitude\n";
    for (const auto& r : traj.records)
        out << format_double(r.invariants.time) << ',' << format_double(r.l4_u) << ','
            << format_double(r.l4_v) << ',' << format_double(r.l5_pow_u) << ','
            << format_double(r.l5_pow_v) << ',' << format_double(r.l5_accumulated) << ','
            << format_double(r.tail_fraction) << ',' << format_double(r.max_amplitude) << '\n';
}

inline void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& curve,
                            const std::string& value_name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
    out << "time," << value_name << '\n';
    for (const auto& p : curve)
        out << format_double(p.time) << ',' << format_double(p.value) << '\n';
}

inline void write_profile_csv(const std::string& path, const RadialProfile& prof) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_profile_csv: cannot open " + path);
    out << "r,value\n";
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        out << format_double(prof.radii[i]) << ',' << format_double(prof.samples[i]) << '\n';
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline json to_json(const InvariantReport& r) {
    return json{{"time", r.time},
                {"mass", r.mass},
                {"momentum", {r.momentum[0], r.momentum[1], r.momentum[2]}},
                {"energy", r.energy},
                {"kinetic", r.kinetic},
                {"quartic", r.quartic},
                {"s_value", r.s_value},
                {"j_value", r.j_value},
                {"k_value", r.k_value}};
}

inline json to_json(const GroundStateConstants& c) {
    return json{{"mass_gs", c.mass_gs},     {"kinetic_gs", c.kinetic_gs},
                {"energy_gs", c.energy_gs}, {"quartic_gs", c.quartic_gs},
                {"j0", c.j0},               {"kgn", c.kgn}};
}

inline json to_json(const GroundState& gs) {
    PohozaevReport rep = pohozaev_report(gs);
    return json{{"beta", gs.beta},
                {"method", to_string(gs.method)},
                {"residual", gs.residual},
                {"constants", to_json(gs.constants)},
                // infimum of the constrained action, derived from the sharp
                // constant; reported without independent verification
                {"derived_nehari_m", 4.0 / (3.0 * std::sqrt(3.0) * gs.constants.kgn)},
                {"identity_residuals",
                 {{"a_minus_3m", rep.a_minus_3m},
                  {"phi_minus_4m", rep.phi_minus_4m},
                  {"e_minus_half_m", rep.e_minus_half_m},
                  {"j_minus_m", rep.j_minus_m},
                  {"k_value", rep.k_value}}}};
}

inline json verdict_json(const Trajectory& traj) {
    return json{{"verdict", to_string(traj.verdict)},
                {"verdict_time", traj.verdict_time},
                {"reports", traj.records.size()},
                {"checkpoints", traj.checkpoints.size()},
                {"warnings", traj.warnings}};
}

} // namespace nls2::io
