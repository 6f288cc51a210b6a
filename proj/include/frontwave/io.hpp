#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frontwave/analysis.hpp"
#include "frontwave/fbsolver.hpp"
#include "frontwave/semiwave.hpp"

namespace frontwave::io {

inline constexpr std::string_view kTraceHeader = "t,h,hprime,sup_u,sup_v,mass";
inline constexpr std::string_view kSnapshotHeader = "t,x,u,v";
inline constexpr std::string_view kProfileHeader = "x,phi,psi";

std::string trace_csv(const RunTrace& trace);
std::string snapshot_csv(const Snapshot& snapshot);
std::string profile_csv(const SemiWaveProfile& profile);

nlohmann::json report_json(const OutcomeReport& report);

std::uint32_t crc32(std::string_view bytes);

/// Output directory that records every file it writes for the manifest.
/// Failures to create the directory or write a file raise Io errors.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);

    void write(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const nlohmann::json& value);

    /// manifest.json: command, status and {name, bytes, crc32} per file.
    void write_manifest(const std::string& command, const std::string& status, bool seedless);

    const std::filesystem::path& path() const { return dir_; }

private:
    struct Entry {
        std::string name;
        std::size_t bytes;
        std::uint32_t crc;
    };
    std::filesystem::path dir_;
    std::vector<Entry> entries_;
};

}  // namespace frontwave::io
