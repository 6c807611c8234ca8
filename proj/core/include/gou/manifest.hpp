#ifndef GOU_MANIFEST_HPP
#define GOU_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>

namespace gou {

std::string sha256_hex(const std::string& data);

/// Write-then-rename so readers never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Per-run provenance: config digest, seed, tool version, timestamps, and a
/// digest for every file the commands of this run have written. Commands
/// merge into an existing manifest, so a multi-command run accumulates its
/// full file list.
struct RunManifest {
    std::string tool_version;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string command;
    std::string started;
    std::string finished;
    std::string condition_summary;
    std::map<std::string, std::string> files;  // name -> sha256

    std::string render() const;
    static RunManifest parse(const std::string& text);

    /// Loads an existing manifest from dir (if any), merges this run's
    /// entries over it, and writes it back atomically.
    void merge_and_write(const std::string& dir) const;
};

} // namespace gou

#endif
