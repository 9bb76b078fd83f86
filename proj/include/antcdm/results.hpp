#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace antcdm {

inline constexpr const char* kVersion = "0.1.0";

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A file to persist; `data` marks result tables (as opposed to the resolved
/// config echo).
struct Table {
    std::string file;
    std::string content;
    bool data = true;
};

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    // wall-clock stamps are opt-in so that re-runs stay byte-identical
    std::string started_at = "unrecorded";
    std::string finished_at = "unrecorded";
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::string>> extra;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << content;
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
}

/// Writes every table, then `manifest.txt` listing them. Returns the manifest path.
inline std::filesystem::path write_results(const std::filesystem::path& dir, RunManifest manifest,
                                           const std::vector<Table>& tables) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::size_t data_tables = 0;
    manifest.outputs.clear();
    for (const auto& t : tables) {
        write_file(dir / t.file, t.content);
        manifest.outputs.push_back(t.file);
        data_tables += t.data;
    }
    std::string text;
    text += "command=" + manifest.command + "\n";
    text += "config_hash=" + manifest.config_hash + "\n";
    text += "seed=" + std::to_string(manifest.seed) + "\n";
    text += "version=" + manifest.version + "\n";
    text += "started_at=" + manifest.started_at + "\n";
    text += "finished_at=" + manifest.finished_at + "\n";
    text += "tables=" + std::to_string(data_tables) + "\n";
    text += std::string("empty=") + (data_tables == 0 ? "true" : "false") + "\n";
    std::string outputs;
    for (std::size_t i = 0; i < manifest.outputs.size(); ++i) outputs += (i ? "," : "") + manifest.outputs[i];
    text += "outputs=" + outputs + "\n";
    for (const auto& [k, v] : manifest.extra) text += k + "=" + v + "\n";
    const auto path = dir / "manifest.txt";
    write_file(path, text);
    return path;
}

} // namespace antcdm
