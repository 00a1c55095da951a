#include "bnmix/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "bnmix/error.hpp"

namespace bnmix {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::MissingMark: return "MissingMark";
    case Errc::BottleneckNotSeparating: return "BottleneckNotSeparating";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::HorizonTooShort: return "HorizonTooShort";
    case Errc::EmptyS: return "EmptyS";
    case Errc::FullS: return "FullS";
    case Errc::StepBudgetExceeded: return "StepBudgetExceeded";
    case Errc::PhiTooLarge: return "PhiTooLarge";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::MissingInput: return "MissingInput";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges) : edges_(std::move(edges)) {
  std::vector<std::size_t> counts(vertex_count, 0);
  for (const auto& e : edges_) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw Error(Errc::InvalidParams, "edge endpoint out of range");
    }
    if (e.u == e.v) throw Error(Errc::InvalidParams, "self-loops are not supported");
    if (!(e.weight > 0.0)) throw Error(Errc::InvalidParams, "edge weights must be positive");
    ++counts[e.u];
    ++counts[e.v];
    if (e.weight != 1.0) unweighted_ = false;
  }
  offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + counts[v];
  targets_.resize(offsets_.back());
  weights_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    targets_[fill[e.u]] = e.v;
    weights_[fill[e.u]++] = e.weight;
    targets_[fill[e.v]] = e.u;
    weights_[fill[e.v]++] = e.weight;
  }
  wdeg_.assign(vertex_count, 0.0);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) wdeg_[v] += weights_[i];
    total_weight_ += wdeg_[v];
  }
}

std::vector<long> bfs_distances(const Graph& g, Vertex source, const std::vector<bool>& allowed) {
  std::vector<long> dist(g.vertex_count(), -1);
  if (!allowed.empty() && !allowed[source]) return dist;
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] >= 0 || (!allowed.empty() && !allowed[w])) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

bool is_connected(const Graph& g, const std::vector<bool>& removed) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> allowed(n, true);
  if (!removed.empty()) {
    for (std::size_t v = 0; v < n; ++v) allowed[v] = !removed[v];
  }
  const auto first = std::find(allowed.begin(), allowed.end(), true);
  if (first == allowed.end()) return true;
  const auto dist = bfs_distances(g, static_cast<Vertex>(first - allowed.begin()), allowed);
  for (std::size_t v = 0; v < n; ++v) {
    if (allowed[v] && dist[v] < 0) return false;
  }
  return true;
}

bool is_bipartite(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> color(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::deque<Vertex> queue{s};
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(u)) {
        if (color[w] < 0) {
          color[w] = 1 - color[u];
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::T0: return "T0";
    case Region::Bottleneck: return "BOTTLENECK";
    case Region::S: return "S";
  }
  return "?";
}

std::string to_string(CaseKind k) { return k == CaseKind::CaseA ? "CaseA" : "CaseB"; }

void Provenance::set(const std::string& key, double value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::optional<double> Provenance::get(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const RegionLayer& RegionTaggedGraph::layer() const {
  if (!regions) throw Error(Errc::MissingMark, "graph '" + name + "' has no region tags");
  return *regions;
}

std::vector<Vertex> RegionTaggedGraph::vertices_in(Region r) const {
  std::vector<Vertex> out;
  const auto& tags = layer().region_of;
  for (Vertex v = 0; v < tags.size(); ++v) {
    if (tags[v] == r) out.push_back(v);
  }
  return out;
}

std::vector<bool> RegionTaggedGraph::mask_of(Region r) const {
  const auto& tags = layer().region_of;
  std::vector<bool> mask(tags.size());
  for (Vertex v = 0; v < tags.size(); ++v) mask[v] = tags[v] == r;
  return mask;
}

long RegionTaggedGraph::z_distance() const {
  const auto& m = layer().marks;
  return bfs_distances(graph, m.origin)[m.z];
}

namespace {

bool has_neighbor_in(const Graph& g, const std::vector<Region>& tags, Vertex v, Region r) {
  for (Vertex w : g.neighbors(v)) {
    if (tags[w] == r) return true;
  }
  return false;
}

bool on_interface(const Graph& g, const std::vector<Region>& tags, Vertex v, Region a, Region b) {
  return (tags[v] == a && has_neighbor_in(g, tags, v, b)) ||
         (tags[v] == b && has_neighbor_in(g, tags, v, a));
}

}  // namespace

std::vector<Violation> validate_regions(const RegionTaggedGraph& g) {
  std::vector<Violation> out;
  const std::size_t n = g.vertex_count();
  if (n == 0) {
    out.push_back({"DisconnectedGraph", "graph has no vertices"});
    return out;
  }
  if (!is_connected(g.graph)) out.push_back({"DisconnectedGraph", "graph is not connected"});
  if (!g.regions) return out;

  const auto& layer = *g.regions;
  const auto& tags = layer.region_of;
  if (tags.size() != n) {
    out.push_back({"MissingMark", "region tag count differs from vertex count"});
    return out;
  }
  if (!layer.subtree_of.empty() && layer.subtree_of.size() != n) {
    out.push_back({"MissingMark", "subtree tag count differs from vertex count"});
  }

  std::size_t counts[3] = {0, 0, 0};
  for (Region r : tags) ++counts[static_cast<int>(r)];
  if (counts[0] == 0) out.push_back({"MissingMark", "T0 empty"});
  if (counts[1] == 0) out.push_back({"MissingMark", "bottleneck empty"});
  if (counts[2] == 0) out.push_back({"MissingMark", "S empty"});

  const auto& m = layer.marks;
  auto in_range = [n](Vertex v) { return v < n; };
  if (!in_range(m.origin) || !in_range(m.z) || !in_range(m.c)) {
    out.push_back({"MissingMark", "mark index out of range"});
    return out;
  }
  if (!on_interface(g.graph, tags, m.origin, Region::T0, Region::Bottleneck)) {
    out.push_back({"MissingMark", "origin 0 is not on the T0/BOTTLENECK interface"});
  }
  std::vector<Vertex> zs = m.z_set;
  if (std::find(zs.begin(), zs.end(), m.z) == zs.end()) zs.push_back(m.z);
  for (Vertex z : zs) {
    if (!in_range(z) || !on_interface(g.graph, tags, z, Region::Bottleneck, Region::S)) {
      out.push_back({"MissingMark", "z is not on the BOTTLENECK/S interface"});
      break;
    }
  }
  if (tags[m.c] != Region::S) out.push_back({"MissingMark", "c is not in S"});
  if (m.boundary.empty()) {
    out.push_back({"MissingMark", "boundary dD is empty"});
  } else {
    for (Vertex b : m.boundary) {
      if (!in_range(b) || tags[b] != Region::T0) {
        out.push_back({"MissingMark", "boundary dD is not contained in T0"});
        break;
      }
    }
  }

  if (counts[0] > 0 && counts[2] > 0) {
    // Remove the bottleneck and look for a T0 -> S path.
    std::vector<bool> allowed(n);
    for (Vertex v = 0; v < n; ++v) allowed[v] = tags[v] != Region::Bottleneck;
    std::vector<bool> seen(n, false);
    std::deque<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
      if (tags[v] == Region::T0) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
    bool leaks = false;
    while (!queue.empty() && !leaks) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : g.graph.neighbors(u)) {
        if (!allowed[w] || seen[w]) continue;
        if (tags[w] == Region::S) {
          leaks = true;
          break;
        }
        seen[w] = true;
        queue.push_back(w);
      }
    }
    if (leaks) {
      out.push_back({"BottleneckNotSeparating", "removing the bottleneck leaves T0 connected to S"});
    }
  }
  return out;
}

RegionTaggedGraph build_case_graph(const CaseSpec& spec) {
  if (!spec.origin || !spec.z || !spec.c || spec.boundary.empty()) {
    throw Error(Errc::MissingMark, "case '" + spec.name + "' must mark origin, z, c and dD");
  }
  if (spec.region_of.size() != spec.vertex_count) {
    throw Error(Errc::MissingMark, "every vertex needs exactly one region tag");
  }
  RegionTaggedGraph g;
  g.name = spec.name;
  g.graph = Graph(spec.vertex_count, spec.edges);
  RegionLayer layer;
  layer.region_of = spec.region_of;
  layer.subtree_of = spec.subtree_of.empty() ? std::vector<int>(spec.vertex_count, -1) : spec.subtree_of;
  layer.marks.origin = *spec.origin;
  layer.marks.z = *spec.z;
  layer.marks.z_set = spec.z_set.empty() ? std::vector<Vertex>{*spec.z} : spec.z_set;
  layer.marks.c = *spec.c;
  layer.marks.boundary = spec.boundary;
  layer.case_kind = spec.case_kind;
  g.regions = std::move(layer);

  const auto violations = validate_regions(g);
  if (!violations.empty()) {
    const auto& v = violations.front();
    Errc code = Errc::MissingMark;
    if (v.code == "DisconnectedGraph") code = Errc::DisconnectedGraph;
    if (v.code == "BottleneckNotSeparating") code = Errc::BottleneckNotSeparating;
    throw Error(code, v.message);
  }
  return g;
}

RegionTaggedGraph make_plain_graph(std::string name, std::size_t vertex_count, std::vector<Edge> edges) {
  RegionTaggedGraph g;
  g.name = std::move(name);
  g.graph = Graph(vertex_count, std::move(edges));
  return g;
}

std::pair<Graph, std::vector<long>> induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  std::vector<long> index(g.vertex_count(), -1);
  std::size_t next = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (keep[v]) index[v] = static_cast<long>(next++);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (keep[e.u] && keep[e.v]) {
      edges.push_back({static_cast<Vertex>(index[e.u]), static_cast<Vertex>(index[e.v]), e.weight});
    }
  }
  return {Graph(next, std::move(edges)), std::move(index)};
}

}  // namespace bnmix
