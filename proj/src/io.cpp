#include "frontwave/io.hpp"

#include <fstream>

#include <zlib.h>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave::io {

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        first = false;
        out += numerics::format_double(v);
    }
    out += '\n';
}

std::string hex32(std::uint32_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string s(8, '0');
    for (int i = 7; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

}  // namespace

std::string trace_csv(const RunTrace& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    for (const auto& s : trace.samples) append_row(out, {s.t, s.h, s.hprime, s.sup_u, s.sup_v, s.mass});
    return out;
}

std::string snapshot_csv(const Snapshot& snap) {
    std::string out(kSnapshotHeader);
    out += '\n';
    for (std::size_t i = 0; i < snap.x.size(); ++i) append_row(out, {snap.t, snap.x[i], snap.u[i], snap.v[i]});
    return out;
}

std::string profile_csv(const SemiWaveProfile& profile) {
    std::string out(kProfileHeader);
    out += '\n';
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
        append_row(out, {profile.x[i], profile.phi[i], profile.psi[i]});
    }
    return out;
}

nlohmann::json report_json(const OutcomeReport& r) {
    nlohmann::json j;
    j["classification"] = to_string(r.classification);
    j["c_hat"] = r.c_hat;
    j["c_hat_stderr"] = r.c_hat_stderr;
    j["h_star_hat"] = r.h_star_hat;
    j["drift_variation"] = r.drift_variation;
    j["drift_converged"] = r.drift_converged;
    j["profile_times"] = r.profile_times;
    j["profile_sup_error"] = r.profile_sup_error;
    j["interior_fit"] = {{"M_hat", r.interior_fit.M_hat},
                         {"delta_hat", r.interior_fit.delta_hat},
                         {"r2", r.interior_fit.r2}};
    j["notes"] = r.notes;
    return j;
}

std::uint32_t crc32(std::string_view bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw Error(ErrorKind::Io, "cannot create output directory '" + dir_.string() + "'" +
                                       (ec ? ": " + ec.message() : std::string()));
    }
}

void OutputDir::write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
    entries_.push_back({name, content.size(), crc32(content)});
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& value) {
    write(name, value.dump(2) + "\n");
}

void OutputDir::write_manifest(const std::string& command, const std::string& status, bool seedless) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& e : entries_) {
        files.push_back({{"name", e.name}, {"bytes", e.bytes}, {"crc32", hex32(e.crc)}});
    }
    nlohmann::json m = {{"command", command}, {"status", status}, {"seedless", seedless}, {"files", files}};
    const std::string text = m.dump(2) + "\n";
    const auto path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace frontwave::io
