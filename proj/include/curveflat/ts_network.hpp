#pragma once

// Time series -> natural visibility graph -> modularity communities -> knot
// vector. Node i of a graph built from a series corresponds to the i-th value;
// day coordinates are recovered with an explicit first_day offset.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace curveflat {

class VisibilityGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;  // first < second

  VisibilityGraph() = default;
  // Sorts and deduplicates; rejects self-loops and out-of-range endpoints.
  VisibilityGraph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(std::size_t a, std::size_t b) const;
  std::vector<std::vector<std::size_t>> adjacency() const;
  bool connected() const;

  friend bool operator==(const VisibilityGraph&, const VisibilityGraph&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
};

struct CommunityPartition {
  std::vector<int> assignment;  // node -> community id, ids contiguous from 0
  double modularity = 0.0;

  int community_count() const;
  std::vector<std::vector<std::size_t>> members() const;

  friend bool operator==(const CommunityPartition&, const CommunityPartition&) = default;
};

enum class KnotSource { paper_default, detected, user };

std::string_view to_string(KnotSource source) noexcept;

struct KnotPartition {
  std::vector<double> interior_knots;
  KnotSource source = KnotSource::user;
};

// Edge (a, b) iff every c in (a, b) lies strictly below the chord from a to b.
VisibilityGraph visibility_graph(std::span<const double> values);

// Newman modularity of an arbitrary assignment.
double modularity(const VisibilityGraph& graph, std::span<const int> assignment);

// Agglomerative greedy modularity maximisation. The seed permutes the initial
// community labels; among equal gains the pair with the lowest labels merges.
CommunityPartition detect_communities(const VisibilityGraph& graph, std::uint64_t seed = 0);

// Midpoints between adjacent maximal runs of equal community id.
KnotPartition knots_from_partition(const CommunityPartition& partition, int first_day = 1,
                                   KnotSource source = KnotSource::detected);

// Inverse of knots_from_partition for contiguous segments: nodes between
// consecutive knots share one community.
CommunityPartition partition_from_knots(std::span<const double> knots, std::size_t node_count, int first_day = 1);

// Q1 = [1-4] u [9-19], Q2 = [5-8], Q3 = [20-26], Q4 = [27-32], Q5 = [33-43]
// over days 1..43.
CommunityPartition builtin_partition();
KnotPartition builtin_knots();

}  // namespace curveflat
