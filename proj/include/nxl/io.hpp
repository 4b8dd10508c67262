// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nxl/errors.hpp"
#include "nxl/version.hpp"

namespace nxl {

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// Write via a temp file in the same directory plus rename, so readers
// never observe a half-written artifact.
inline void atomic_write_file(const std::filesystem::path& path,
                              std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// Everything needed to reproduce a run and verify its outputs.
struct RunManifest {
    std::string command;
    std::string scenario_path;
    nlohmann::json parameters;  // resolved values, units explicit in keys
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> outputs;  // file, digest

    void add_output(const std::string& file, std::string_view content) {
        outputs.emplace_back(file, fnv1a64_hex(content));
    }

    std::string to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["scenario"] = scenario_path;
        j["parameters"] = parameters;
        j["tool_version"] = version;
        if (seed) j["seed"] = *seed;
        auto sorted = outputs;
        std::sort(sorted.begin(), sorted.end());
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [file, digest] : sorted) {
            out.push_back({{"file", file}, {"fnv1a64", digest}});
        }
        j["outputs"] = out;
        return j.dump(2) + "\n";
    }

    void write(const std::filesystem::path& dir) const {
        atomic_write_file(dir / "manifest.json", to_json());
    }
};

// Convenience: write an artifact and record it in one step.
inline void emit_artifact(RunManifest& manifest,
                          const std::filesystem::path& out_dir,
                          const std::string& name, std::string_view content) {
    atomic_write_file(out_dir / name, content);
    manifest.add_output(name, content);
}

}  // namespace nxl
