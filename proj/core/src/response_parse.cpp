#include "veo/response_parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "veo/error.hpp"

namespace veo {

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_trim_char(unsigned char c) { return std::ispunct(c) != 0 && c != '_' && c != '-'; }

std::string strip_fences(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line.compare(first, 3, "```") == 0) continue;
    out += line;
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::vector<std::string> parse_node_list(std::string_view text) {
  std::string body = strip_fences(text);
  const auto open = body.find('[');
  if (open != std::string::npos) {
    const auto close = body.find(']', open + 1);
    if (close != std::string::npos) body = body.substr(open + 1, close - open - 1);
  }
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && is_trim_char(static_cast<unsigned char>(current[b]))) ++b;
    while (e > b && is_trim_char(static_cast<unsigned char>(current[e - 1]))) --e;
    if (e > b) tokens.push_back(current.substr(b, e - b));
    current.clear();
  };
  for (char ch : body) {
    if (ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      current.push_back(ch);
    }
  }
  flush();
  if (std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return is_digits(t); })) {
    std::erase_if(tokens, [](const std::string& t) { return !is_digits(t); });
  }
  if (tokens.empty()) throw ParseError("no node labels found in model reply", 0, std::string(text));
  return tokens;
}

std::pair<std::string, std::string> parse_swap_pair(std::string_view text) {
  auto tokens = parse_node_list(text);
  if (tokens.size() != 2) {
    throw ParseError("expected exactly two labels (remove, add), found " + std::to_string(tokens.size()), 0,
                     std::string(text));
  }
  return {std::move(tokens[0]), std::move(tokens[1])};
}

std::string format_node_list(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ", ";
    out += labels[i];
  }
  return out;
}

}  // namespace veo
