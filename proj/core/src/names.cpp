#include "veo/names.hpp"

#include "veo/error.hpp"

namespace veo {

NodeNames::NodeNames(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (NodeIndex v = 0; v < labels_.size(); ++v) {
    if (!index_.emplace(labels_[v], v).second) throw GraphError("duplicate node label '" + labels_[v] + "'");
  }
}

std::optional<NodeIndex> NodeNames::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string NodeNames::unused_label() const {
  for (std::size_t i = labels_.size();; ++i) {
    auto candidate = std::to_string(i);
    if (!index_.contains(candidate)) return candidate;
  }
}

}  // namespace veo
