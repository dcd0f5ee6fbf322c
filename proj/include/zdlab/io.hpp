#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace zdlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility record written next to every file a command produces.
/// Contains no timestamps: re-running the same command with the same tool
/// version must reproduce every output byte for byte.
struct RunManifest {
    std::string command;
    std::string model_spec;
    nlohmann::json numeric_config = nlohmann::json::object();
    std::vector<std::string> output_paths;
    std::string tool_version = kToolVersion;

    nlohmann::json to_json() const;
    void write(const std::string& path) const;
};

/// Writes content to path, throwing zdlab::Error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace zdlab
