#include "veo/hashing.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <vector>

#include "veo/error.hpp"

namespace veo {

std::string sha256_hex(std::span<const std::uint8_t> data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(data.data(), data.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char byte : digest) {
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xF]);
  }
  return out;
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string base64_encode(std::span<const std::uint8_t> data) {
  if (data.empty()) return {};
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                                static_cast<int>(data.size()));
  if (n < 0) throw Error("base64 encoding failed");
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string graph_hash(const Graph& g) {
  std::string canon;
  for (const auto& label : g.labels()) {
    canon += label;
    canon.push_back('\n');
  }
  canon.push_back('\n');
  for (const auto& [u, v] : g.edges()) {
    canon += std::to_string(u);
    canon.push_back(' ');
    canon += std::to_string(v);
    canon.push_back('\n');
  }
  return sha256_hex(canon);
}

}  // namespace veo
