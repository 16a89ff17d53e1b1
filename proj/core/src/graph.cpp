#include "ngev/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include "ngev/errors.hpp"

namespace ngev {

namespace {

std::uint64_t pair_key(NodeId tail, NodeId head) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tail)) << 32) |
         static_cast<std::uint32_t>(head);
}

}  // namespace

Graph::Graph(NodeId node_count, std::vector<Link> links)
    : node_count_(node_count), links_(std::move(links)) {
  if (node_count_ < 0) fail(ErrorCategory::structural, "negative node count");

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(links_.size() * 2);
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const Link& e = links_[l];
    if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 || e.head >= node_count_) {
      fail(ErrorCategory::structural,
           "link " + std::to_string(l) + " references unknown node");
    }
    if (e.tail == e.head) {
      fail(ErrorCategory::structural,
           "self loop at node " + std::to_string(e.tail));
    }
    if (!seen.insert(pair_key(e.tail, e.head)).second) {
      fail(ErrorCategory::structural,
           "parallel link between nodes " + std::to_string(e.tail) + " and " +
               std::to_string(e.head));
    }
  }

  auto build = [&](bool outgoing, std::vector<std::int64_t>& offset,
                   std::vector<LinkId>& adj) {
    offset.assign(static_cast<std::size_t>(node_count_) + 1, 0);
    for (const Link& e : links_) ++offset[static_cast<std::size_t>(outgoing ? e.tail : e.head) + 1];
    for (NodeId i = 0; i < node_count_; ++i) offset[i + 1] += offset[i];
    adj.resize(links_.size());
    std::vector<std::int64_t> cursor(offset.begin(), offset.end() - 1);
    for (LinkId l = 0; l < link_count(); ++l) {
      const Link& e = links_[static_cast<std::size_t>(l)];
      adj[static_cast<std::size_t>(cursor[outgoing ? e.tail : e.head]++)] = l;
    }
  };
  build(true, out_offset_, out_adj_);
  build(false, in_offset_, in_adj_);
}

std::span<const LinkId> Graph::span_of(const std::vector<std::int64_t>& offset,
                                       const std::vector<LinkId>& adj, NodeId i) const {
  if (i < 0 || i >= node_count_) fail(ErrorCategory::structural, "node id out of range");
  const auto begin = static_cast<std::size_t>(offset[static_cast<std::size_t>(i)]);
  const auto end = static_cast<std::size_t>(offset[static_cast<std::size_t>(i) + 1]);
  return {adj.data() + begin, end - begin};
}

LinkId Graph::find_link(NodeId tail, NodeId head) const {
  if (tail < 0 || tail >= node_count_) return kNoLink;
  for (LinkId l : out_links(tail)) {
    if (links_[static_cast<std::size_t>(l)].head == head) return l;
  }
  return kNoLink;
}

}  // namespace ngev
