#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "veo/graph.hpp"

namespace veo {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_hex(std::string_view text);

std::string base64_encode(std::span<const std::uint8_t> data);

/// Hash of the labels and sorted edge list; identical graphs hash equal.
std::string graph_hash(const Graph& g);

}  // namespace veo
