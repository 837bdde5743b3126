#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "veo/graph.hpp"

namespace veo {

/// The labels a model sees for each working node, with reverse lookup.
/// Usually the original-graph labels of a sparsified working graph.
class NodeNames {
 public:
  NodeNames() = default;
  /// Throws GraphError on duplicate labels.
  explicit NodeNames(std::vector<std::string> labels);
  static NodeNames of(const Graph& g) { return NodeNames(g.labels()); }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(NodeIndex v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeIndex> find(std::string_view label) const;

  /// Smallest non-negative integer, as text, that is not a label.
  std::string unused_label() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
};

}  // namespace veo
