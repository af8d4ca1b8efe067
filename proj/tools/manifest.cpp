#include "manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "ckpt/error.hpp"

namespace ckpt::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot read {}", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["tool"] = "ckptplan";
  doc["version"] = CKPT_VERSION;
  doc["command"] = manifest.command;
  doc["seed"] = manifest.seed ? nlohmann::ordered_json(*manifest.seed) : nullptr;
  doc["parameters"] = manifest.parameters;
  doc["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : manifest.inputs) {
    doc["inputs"].push_back({{"path", in.string()}, {"sha256", sha256_file(in)}});
  }
  doc["outputs"] = nlohmann::ordered_json::array();
  for (const auto& out : manifest.outputs) {
    doc["outputs"].push_back({{"path", out.string()}, {"sha256", sha256_file(out)}});
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot write {}", path.string()));
  file << doc.dump(2) << '\n';
}

}  // namespace ckpt::cli
