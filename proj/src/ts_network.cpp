#include "curveflat/ts_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "curveflat/error.hpp"
#include "curveflat/kernels.hpp"

namespace curveflat {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("ts_network", message); }

// splitmix64; fixed so a seed means the same permutation on every platform.
std::uint64_t next_random(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<int> seeded_labels(std::size_t n, std::uint64_t seed) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  if (seed == 0) return labels;
  std::uint64_t state = seed;
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do {
      r = next_random(state);
    } while (r >= limit);
    std::swap(labels[i - 1], labels[r % bound]);
  }
  return labels;
}

std::vector<int> relabel_by_first_appearance(std::span<const int> raw) {
  std::vector<int> out(raw.size());
  std::vector<int> mapping;
  std::vector<int> seen_raw;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = std::find(seen_raw.begin(), seen_raw.end(), raw[i]);
    if (it == seen_raw.end()) {
      seen_raw.push_back(raw[i]);
      mapping.push_back(static_cast<int>(mapping.size()));
      out[i] = mapping.back();
    } else {
      out[i] = mapping[static_cast<std::size_t>(it - seen_raw.begin())];
    }
  }
  return out;
}

}  // namespace

VisibilityGraph::VisibilityGraph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  for (auto& [a, b] : edges_) {
    if (a == b) fail("self-loop on node " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (b >= node_count_) fail("edge endpoint " + std::to_string(b) + " out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool VisibilityGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::vector<std::vector<std::size_t>> VisibilityGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(node_count_);
  for (const auto& [a, b] : edges_) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

bool VisibilityGraph::connected() const {
  if (node_count_ == 0) return true;
  const auto adj = adjacency();
  std::vector<bool> seen(node_count_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == node_count_;
}

int CommunityPartition::community_count() const {
  return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

std::vector<std::vector<std::size_t>> CommunityPartition::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(community_count()));
  for (std::size_t i = 0; i < assignment.size(); ++i) out[static_cast<std::size_t>(assignment[i])].push_back(i);
  return out;
}

std::string_view to_string(KnotSource source) noexcept {
  switch (source) {
    case KnotSource::paper_default: return "paper_default";
    case KnotSource::detected: return "detected";
    case KnotSource::user: return "user";
  }
  return "?";
}

VisibilityGraph visibility_graph(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) fail("visibility graph needs at least two points");
  for (double v : values) {
    if (!std::isfinite(v)) fail("series contains a non-finite value");
  }
  // c is hidden from a's view of b iff slope(a, c) >= slope(a, b), so b is
  // visible iff its slope beats the running maximum of the slopes before it.
  const auto& k = kernels::active();
  std::vector<double> slopes(n);
  std::vector<VisibilityGraph::Edge> edges;
  for (std::size_t a = 0; a + 1 < n; ++a) {
    k.slopes_from(values.data(), n, a, slopes.data());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; a + 1 + j < n; ++j) {
      if (slopes[j] > best) {
        edges.emplace_back(a, a + 1 + j);
        best = slopes[j];
      }
    }
  }
  return VisibilityGraph(n, std::move(edges));
}

double modularity(const VisibilityGraph& graph, std::span<const int> assignment) {
  if (assignment.size() != graph.node_count()) fail("assignment length does not match node count");
  const double m = static_cast<double>(graph.edges().size());
  if (m == 0) return 0.0;
  const int k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> internal(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree(static_cast<std::size_t>(k), 0.0);
  for (const auto& [a, b] : graph.edges()) {
    const auto ca = static_cast<std::size_t>(assignment[a]);
    const auto cb = static_cast<std::size_t>(assignment[b]);
    degree[ca] += 1.0;
    degree[cb] += 1.0;
    if (ca == cb) internal[ca] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double frac = degree[c] / (2.0 * m);
    q += internal[c] / m - frac * frac;
  }
  return q;
}

CommunityPartition detect_communities(const VisibilityGraph& graph, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n == 0) fail("empty graph");
  if (!graph.connected()) fail("graph is not connected");

  const auto m = static_cast<std::int64_t>(graph.edges().size());
  std::vector<int> label = seeded_labels(n, seed);

  // Community c starts as the node whose label is c. links[c * n + d] counts
  // edges between communities c and d.
  std::vector<std::int64_t> links(n * n, 0);
  std::vector<std::int64_t> degree(n, 0);
  for (const auto& [a, b] : graph.edges()) {
    const auto ca = static_cast<std::size_t>(label[a]);
    const auto cb = static_cast<std::size_t>(label[b]);
    links[ca * n + cb] += 1;
    links[cb * n + ca] += 1;
    degree[ca] += 1;
    degree[cb] += 1;
  }
  std::vector<bool> alive(n, true);

  // Merging c and d changes modularity by (2m * l_cd - k_c * k_d) / (2 m^2);
  // the numerator is compared exactly in integers.
  for (;;) {
    std::int64_t best = 0;
    std::size_t best_c = n;
    std::size_t best_d = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c]) continue;
      for (std::size_t d = c + 1; d < n; ++d) {
        if (!alive[d] || links[c * n + d] == 0) continue;
        const std::int64_t gain = 2 * m * links[c * n + d] - degree[c] * degree[d];
        if (gain > best) {
          best = gain;
          best_c = c;
          best_d = d;
        }
      }
    }
    if (best_c == n) break;
    for (std::size_t x = 0; x < n; ++x) {
      if (!alive[x] || x == best_c || x == best_d) continue;
      links[best_c * n + x] += links[best_d * n + x];
      links[x * n + best_c] = links[best_c * n + x];
    }
    degree[best_c] += degree[best_d];
    alive[best_d] = false;
    for (auto& l : label) {
      if (l == static_cast<int>(best_d)) l = static_cast<int>(best_c);
    }
  }

  CommunityPartition out;
  out.assignment = relabel_by_first_appearance(label);
  out.modularity = modularity(graph, out.assignment);
  return out;
}

KnotPartition knots_from_partition(const CommunityPartition& partition, int first_day, KnotSource source) {
  KnotPartition out;
  out.source = source;
  const auto& a = partition.assignment;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] != a[i - 1]) out.interior_knots.push_back(first_day + static_cast<double>(i - 1) + 0.5);
  }
  return out;
}

CommunityPartition partition_from_knots(std::span<const double> knots, std::size_t node_count, int first_day) {
  if (!std::is_sorted(knots.begin(), knots.end())) fail("knots must be increasing");
  CommunityPartition out;
  out.assignment.resize(node_count);
  std::size_t next = 0;
  int id = 0;
  for (std::size_t i = 0; i < node_count; ++i) {
    const double day = first_day + static_cast<double>(i);
    while (next < knots.size() && knots[next] < day) {
      ++next;
      if (i > 0) ++id;
    }
    out.assignment[i] = id;
  }
  out.assignment = relabel_by_first_appearance(out.assignment);
  return out;
}

CommunityPartition builtin_partition() {
  CommunityPartition out;
  out.assignment.resize(43);
  for (int day = 1; day <= 43; ++day) {
    int q = 0;
    if (day >= 5 && day <= 8) q = 1;
    else if (day >= 20 && day <= 26) q = 2;
    else if (day >= 27 && day <= 32) q = 3;
    else if (day >= 33) q = 4;
    out.assignment[static_cast<std::size_t>(day - 1)] = q;
  }
  return out;
}

KnotPartition builtin_knots() { return knots_from_partition(builtin_partition(), 1, KnotSource::paper_default); }

}  // namespace curveflat
