#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ngev {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

inline constexpr LinkId kNoLink = -1;

struct Link {
  NodeId tail = 0;
  NodeId head = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Directed graph with dense 0-based node ids and a fixed link list.
/// A link is identified by its (tail, head) node pair: self loops and
/// parallel links are rejected at construction. Successor and predecessor
/// adjacency is stored in CSR form; instances are immutable once built and
/// safe to share across threads.
class Graph {
 public:
  Graph() = default;
  Graph(NodeId node_count, std::vector<Link> links);

  NodeId node_count() const noexcept { return node_count_; }
  LinkId link_count() const noexcept { return static_cast<LinkId>(links_.size()); }

  const Link& link(LinkId l) const { return links_[static_cast<std::size_t>(l)]; }
  std::span<const Link> links() const noexcept { return links_; }

  /// Outgoing link ids of node i (heads form F(i)).
  std::span<const LinkId> out_links(NodeId i) const {
    return span_of(out_offset_, out_adj_, i);
  }
  /// Incoming link ids of node i (tails form B(i)).
  std::span<const LinkId> in_links(NodeId i) const {
    return span_of(in_offset_, in_adj_, i);
  }

  int out_degree(NodeId i) const { return static_cast<int>(out_links(i).size()); }
  int in_degree(NodeId i) const { return static_cast<int>(in_links(i).size()); }

  /// Link id of (tail, head), or kNoLink when absent.
  LinkId find_link(NodeId tail, NodeId head) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.links_ == b.links_;
  }

 private:
  std::span<const LinkId> span_of(const std::vector<std::int64_t>& offset,
                                  const std::vector<LinkId>& adj, NodeId i) const;

  NodeId node_count_ = 0;
  std::vector<Link> links_;
  std::vector<std::int64_t> out_offset_, in_offset_;
  std::vector<LinkId> out_adj_, in_adj_;
};

}  // namespace ngev
