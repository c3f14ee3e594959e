#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sensortext/error.hpp"
#include "sensortext/rng.hpp"

#ifndef SENSORTEXT_VERSION
#define SENSORTEXT_VERSION "0.0.0"
#endif

namespace sensortext {

inline constexpr int kManifestSchemaVersion = 1;

inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + hex;
}

inline std::string manifest_path_for(const std::filesystem::path& out) { return out.string() + ".manifest.json"; }

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Records what produced an artifact. `options` holds every resolved
/// subcommand option and is what a rerun consumes.
struct RunManifest {
    std::string subcommand;
    nlohmann::json options = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object();   // role -> {path, digest}
    nlohmann::json outputs = nlohmann::json::object();  // role -> {path, digest}
    std::string tool_version = SENSORTEXT_VERSION;
    std::string timestamp;

    void add_input(const std::string& role, const std::filesystem::path& p) {
        inputs[role] = {{"path", p.string()}, {"digest", file_digest(p)}};
    }
    void add_output(const std::string& role, const std::filesystem::path& p) {
        outputs[role] = {{"path", p.string()}, {"digest", file_digest(p)}};
    }

    nlohmann::json to_json() const {
        return {{"schema_version", kManifestSchemaVersion},
                {"tool", "sensortext"},
                {"tool_version", tool_version},
                {"subcommand", subcommand},
                {"options", options},
                {"inputs", inputs},
                {"outputs", outputs},
                {"timestamp", timestamp}};
    }

    static RunManifest from_json(const nlohmann::json& j) {
        try {
            RunManifest m;
            m.subcommand = j.at("subcommand").get<std::string>();
            m.options = j.at("options");
            m.inputs = j.value("inputs", nlohmann::json::object());
            m.outputs = j.value("outputs", nlohmann::json::object());
            m.tool_version = j.value("tool_version", std::string());
            m.timestamp = j.value("timestamp", std::string());
            return m;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("manifest: ") + e.what());
        }
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write manifest " + path.string());
        out << to_json().dump(2) << '\n';
    }

    static RunManifest load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open manifest " + path.string());
        try {
            return from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
};

}  // namespace sensortext
