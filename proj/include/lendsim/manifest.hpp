#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace lendsim::io {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Written alongside every command's outputs; two runs that agree on
// everything but the timestamp produce byte-identical outputs.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t master_seed = 0;
  std::string artifact_version = kArtifactVersion;
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::string timestamp;  // ISO 8601 UTC, filled at write time when empty
};

std::string sha256_file(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, RunManifest manifest);

}  // namespace lendsim::io
