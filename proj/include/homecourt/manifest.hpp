#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "homecourt/errors.hpp"
#include "homecourt/version.hpp"

namespace homecourt {

// Record of one engine run: re-running the stored argv reproduces the
// outputs byte for byte.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::map<std::string, std::string> input_hashes;  // path -> content hash
    nlohmann::json parameters;
    std::string engine = engine_version;
    std::uint64_t seed = 0;
    std::string created_at;  // only field allowed to differ between replays
};

inline std::uint64_t fnv1a_bytes(const char* data, std::size_t len) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file for hashing: " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char out[20];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

inline std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["argv"] = manifest.argv;
    j["inputs"] = manifest.input_hashes;
    j["parameters"] = manifest.parameters;
    j["engine"] = manifest.engine;
    j["seed"] = manifest.seed;
    j["created_at"] = manifest.created_at.empty() ? utc_now_iso8601() : manifest.created_at;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

inline RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot read manifest: " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.input_hashes = j.at("inputs").get<std::map<std::string, std::string>>();
    m.parameters = j.at("parameters");
    m.engine = j.at("engine").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.created_at = j.at("created_at").get<std::string>();
    return m;
}

} // namespace homecourt
