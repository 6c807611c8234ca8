#include "gou/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gou/errors.hpp"

namespace gou {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error(ErrorCode::IoError, "sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
        out << content;
        if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorCode::IoError, "rename failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string RunManifest::render() const {
    std::ostringstream o;
    o << "tool = " << tool_version << "\n";
    o << "config_digest = " << config_digest << "\n";
    o << "seed = " << seed << "\n";
    o << "command = " << command << "\n";
    o << "started = " << started << "\n";
    o << "finished = " << finished << "\n";
    o << "conditions = " << condition_summary << "\n";
    o << "[files]\n";
    for (const auto& [name, digest] : files) o << name << " " << digest << "\n";
    return o.str();
}

RunManifest RunManifest::parse(const std::string& text) {
    RunManifest m;
    std::istringstream in(text);
    std::string line;
    bool in_files = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line == "[files]") {
            in_files = true;
            continue;
        }
        if (in_files) {
            const std::size_t sp = line.rfind(' ');
            if (sp == std::string::npos) continue;
            m.files[line.substr(0, sp)] = line.substr(sp + 1);
            continue;
        }
        const std::size_t eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 3);
        if (key == "tool") m.tool_version = val;
        else if (key == "config_digest") m.config_digest = val;
        else if (key == "seed") m.seed = std::strtoull(val.c_str(), nullptr, 10);
        else if (key == "command") m.command = val;
        else if (key == "started") m.started = val;
        else if (key == "finished") m.finished = val;
        else if (key == "conditions") m.condition_summary = val;
    }
    return m;
}

void RunManifest::merge_and_write(const std::string& dir) const {
    const std::string path = dir + "/manifest.txt";
    RunManifest merged = *this;
    std::ifstream probe(path);
    if (probe) {
        std::ostringstream ss;
        ss << probe.rdbuf();
        RunManifest old = parse(ss.str());
        // keep digests of files from earlier commands of the same run
        for (const auto& [name, digest] : old.files)
            merged.files.emplace(name, digest);
    }
    atomic_write(path, merged.render());
}

} // namespace gou
