#include "bnmix/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bnmix/error.hpp"
#include "bnmix/report.hpp"

namespace bnmix {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

Region parse_region(const std::string& s, std::size_t line_no) {
  if (s == "T0") return Region::T0;
  if (s == "BOTTLENECK") return Region::Bottleneck;
  if (s == "S") return Region::S;
  throw Error(Errc::IoError, "line " + std::to_string(line_no) + ": unknown region '" + s + "'");
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# vertices: " << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (e.weight != 1.0) out << ' ' << format_double(e.weight);
    out << '\n';
  }
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared = 0;
  bool has_declared = false;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# vertices:", 0) == 0) {
      declared = std::stoul(line.substr(11));
      has_declared = true;
      continue;
    }
    std::istringstream fields(strip_comment(line));
    Edge e;
    if (!(fields >> e.u)) continue;
    if (!(fields >> e.v)) throw Error(Errc::IoError, "line " + std::to_string(line_no) + ": expected 'u v [w]'");
    if (!(fields >> e.weight)) e.weight = 1.0;
    max_index = std::max({max_index, e.u + 1, e.v + 1});
    edges.push_back(e);
  }
  return Graph(has_declared ? declared : max_index, std::move(edges));
}

void write_region_sidecar(std::ostream& out, const RegionTaggedGraph& g) {
  const auto& layer = g.layer();
  const auto& m = layer.marks;
  out << "# case " << to_string(layer.case_kind) << '\n';
  std::vector<std::string> marks(g.vertex_count());
  auto add = [&marks](Vertex v, const char* tag) {
    if (!marks[v].empty()) marks[v] += ',';
    marks[v] += tag;
  };
  add(m.origin, "origin");
  add(m.z, "z");
  for (Vertex z : m.z_set) {
    if (z != m.z) add(z, "zcopy");
  }
  add(m.c, "c");
  for (Vertex b : m.boundary) add(b, "dD");
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << v << ' ' << to_string(layer.region_of[v]) << ' ' << layer.subtree_of[v] << ' '
        << (marks[v].empty() ? "-" : marks[v]) << '\n';
  }
}

RegionTaggedGraph read_tagged_graph(std::istream& edges, std::istream& sidecar, std::string name) {
  const Graph graph = read_edge_list(edges);
  CaseSpec spec;
  spec.name = std::move(name);
  spec.vertex_count = graph.vertex_count();
  spec.edges = graph.edges();
  spec.region_of.assign(spec.vertex_count, Region::T0);
  spec.subtree_of.assign(spec.vertex_count, -1);
  std::vector<bool> seen(spec.vertex_count, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(sidecar, line)) {
    ++line_no;
    if (line.rfind("# case ", 0) == 0) {
      spec.case_kind = line.substr(7) == "CaseB" ? CaseKind::CaseB : CaseKind::CaseA;
      continue;
    }
    std::istringstream fields(strip_comment(line));
    Vertex v = 0;
    std::string region, marks;
    int subtree = -1;
    if (!(fields >> v)) continue;
    if (!(fields >> region >> subtree >> marks) || v >= spec.vertex_count) {
      throw Error(Errc::IoError, "line " + std::to_string(line_no) + ": expected 'index region subtree marks'");
    }
    seen[v] = true;
    spec.region_of[v] = parse_region(region, line_no);
    spec.subtree_of[v] = subtree;
    if (marks == "-") continue;
    std::istringstream tags(marks);
    std::string tag;
    while (std::getline(tags, tag, ',')) {
      if (tag == "origin") {
        spec.origin = v;
      } else if (tag == "z") {
        spec.z = v;
        spec.z_set.insert(spec.z_set.begin(), v);
      } else if (tag == "zcopy") {
        spec.z_set.push_back(v);
      } else if (tag == "c") {
        spec.c = v;
      } else if (tag == "dD") {
        spec.boundary.push_back(v);
      } else {
        throw Error(Errc::IoError, "line " + std::to_string(line_no) + ": unknown mark '" + tag + "'");
      }
    }
  }
  for (bool s : seen) {
    if (!s) throw Error(Errc::MissingMark, "every vertex needs exactly one region tag");
  }
  return build_case_graph(spec);
}

void save_graph(const RegionTaggedGraph& g, const std::string& edge_path, const std::string& sidecar_path) {
  std::ofstream edges(edge_path);
  if (!edges) throw Error(Errc::IoError, "cannot write " + edge_path);
  write_edge_list(edges, g.graph);
  if (g.tagged()) {
    std::ofstream side(sidecar_path);
    if (!side) throw Error(Errc::IoError, "cannot write " + sidecar_path);
    write_region_sidecar(side, g);
  }
}

}  // namespace bnmix
