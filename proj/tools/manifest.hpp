#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ckpt::cli {

/// Reproducibility record written next to a command's file outputs.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::optional<std::uint64_t> seed;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace ckpt::cli
