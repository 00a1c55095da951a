#pragma once

#include <iosfwd>
#include <string>

#include "bnmix/graph.hpp"

namespace bnmix {

// Edge list: "# vertices: n" header, then one "u v [w]" line per edge; '#' starts a comment.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

// Region sidecar: one "index region subtree marks" line per vertex, marks a comma list
// drawn from {origin, z, zcopy, c, dD} or "-".
void write_region_sidecar(std::ostream& out, const RegionTaggedGraph& g);
RegionTaggedGraph read_tagged_graph(std::istream& edges, std::istream& sidecar, std::string name = "loaded");

void save_graph(const RegionTaggedGraph& g, const std::string& edge_path, const std::string& sidecar_path);

}  // namespace bnmix
