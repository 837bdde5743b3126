#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace veo {

/// Tolerant extraction of node labels from a model reply.
///
/// Drops code-fence lines, prefers the contents of the first [...] group,
/// splits on commas, semicolons and whitespace and trims punctuation. When any
/// token is numeric only numeric tokens are kept, so prose around a list of
/// integer labels is ignored. Order is preserved; membership and length are
/// not checked. Throws ParseError carrying the raw text when nothing remains.
std::vector<std::string> parse_node_list(std::string_view text);

/// Exactly two labels in order (remove, add). Throws ParseError otherwise.
std::pair<std::string, std::string> parse_swap_pair(std::string_view text);

/// Canonical comma-separated form; parse_node_list inverts it.
std::string format_node_list(const std::vector<std::string>& labels);

}  // namespace veo
