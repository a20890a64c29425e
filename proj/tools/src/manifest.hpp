#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace khess::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes <primary>.manifest.json describing how `outputs` were produced.
/// `run` carries the command, arguments, parameters and tolerances.
void write_manifest(const std::filesystem::path& primary, nlohmann::ordered_json run,
                    const std::vector<std::filesystem::path>& outputs);

}  // namespace khess::cli
