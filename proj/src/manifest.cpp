#include "lendsim/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>

#include "lendsim/errors.hpp"

namespace lendsim::io {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError("cannot open " + path.string() + " for hashing");
  }
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof(b), "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

void write_manifest(const std::filesystem::path& path, RunManifest manifest) {
  if (manifest.timestamp.empty()) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    manifest.timestamp = buf;
  }
  nlohmann::json obj;
  obj["command"] = manifest.command;
  obj["config_path"] = manifest.config_path;
  obj["master_seed"] = manifest.master_seed;
  obj["artifact_version"] = manifest.artifact_version;
  obj["input_digests"] = manifest.input_digests;
  obj["timestamp"] = manifest.timestamp;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  out << obj.dump(2) << '\n';
}

}  // namespace lendsim::io
