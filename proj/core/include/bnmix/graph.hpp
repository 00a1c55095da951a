#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bnmix {

using Vertex = std::size_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 1.0;  // conductance; 1 for simple graphs
};

/// Undirected weighted graph stored as CSR adjacency. Immutable once built.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(Vertex v) const noexcept {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  /// Sum of incident conductances.
  double weighted_degree(Vertex v) const noexcept { return wdeg_[v]; }
  double total_weight() const noexcept { return total_weight_; }
  bool is_unweighted() const noexcept { return unweighted_; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<double> weights_;
  std::vector<double> wdeg_;
  double total_weight_ = 0.0;
  bool unweighted_ = true;
};

/// Breadth-first distances from `source`; unreachable vertices get -1.
/// When `allowed` is non-empty the search stays inside vertices with allowed[v] true.
std::vector<long> bfs_distances(const Graph& g, Vertex source, const std::vector<bool>& allowed = {});

bool is_connected(const Graph& g, const std::vector<bool>& removed = {});
bool is_bipartite(const Graph& g);

enum class Region : std::uint8_t { T0, Bottleneck, S };
enum class CaseKind : std::uint8_t { CaseA, CaseB };

std::string to_string(Region r);
std::string to_string(CaseKind k);

struct Marks {
  Vertex origin = 0;              // vertex 0 of the construction
  Vertex z = 0;                   // representative of the bottleneck/S interface
  std::vector<Vertex> z_set;      // every copy of z (size r for glued copies)
  Vertex c = 0;                   // far start in S
  std::vector<Vertex> boundary;   // dD, subset of T0
};

struct RegionLayer {
  std::vector<Region> region_of;
  std::vector<int> subtree_of;  // -1 when the vertex belongs to no tree
  Marks marks;
  CaseKind case_kind = CaseKind::CaseA;
};

/// Ordered key/value record of construction parameters (raw and rounded).
struct Provenance {
  std::vector<std::pair<std::string, double>> entries;

  void set(const std::string& key, double value);
  std::optional<double> get(const std::string& key) const;
};

struct RegionTaggedGraph {
  std::string name;
  Graph graph;
  std::optional<RegionLayer> regions;
  Provenance provenance;

  std::size_t vertex_count() const noexcept { return graph.vertex_count(); }
  bool tagged() const noexcept { return regions.has_value(); }
  const RegionLayer& layer() const;

  std::vector<Vertex> vertices_in(Region r) const;
  std::vector<bool> mask_of(Region r) const;
  /// Graph distance of z from the origin.
  long z_distance() const;
};

struct Violation {
  std::string code;
  std::string message;
};

/// Lists every violated invariant; empty iff the graph is valid.
std::vector<Violation> validate_regions(const RegionTaggedGraph& g);

/// Explicit description consumed by build_case_graph.
struct CaseSpec {
  std::string name = "case";
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<Region> region_of;
  std::vector<int> subtree_of;  // optional; empty means none
  std::optional<Vertex> origin;
  std::optional<Vertex> z;
  std::vector<Vertex> z_set;    // optional extra copies of z
  std::optional<Vertex> c;
  std::vector<Vertex> boundary;
  CaseKind case_kind = CaseKind::CaseA;
};

/// Throws Error{DisconnectedGraph | MissingMark | BottleneckNotSeparating} on the first violation.
RegionTaggedGraph build_case_graph(const CaseSpec& spec);

/// Untagged graph (no regions) used for plain fixtures.
RegionTaggedGraph make_plain_graph(std::string name, std::size_t vertex_count, std::vector<Edge> edges);

/// Induced subgraph on `keep`; returns the graph and the old->new index map (-1 when dropped).
std::pair<Graph, std::vector<long>> induced_subgraph(const Graph& g, const std::vector<bool>& keep);

}  // namespace bnmix
